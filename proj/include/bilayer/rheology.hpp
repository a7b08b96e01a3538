#pragma once

#include <functional>

namespace bilayer {

/// Physical constants of the two-layer film in rescaled (dimensionless) form.
///
/// The lower fluid is Newtonian with its viscosity absorbed into the scaling,
/// the upper fluid shear-thins: its inverse viscosity grows like
/// (1/mu0) * (1 + |stress/tau_half|^(p-1)).
struct FluidParams {
  double m = 1.0;         ///< zero-shear viscosity ratio, upper over lower (> 0)
  double s_plus = 1.0;    ///< surface tension coefficient of the free surface (> 0)
  double s_minus = 1.0;   ///< surface tension coefficient of the fluid-fluid interface (> 0)
  double mu0_plus = 1.0;  ///< zero-shear viscosity of the upper fluid (> 0)
  double tau_half = 1.0;  ///< stress at which the upper viscosity halves; +inf = Newtonian
  double p = 2.0;         ///< flow-behaviour exponent; 1 = Newtonian, > 1 shear-thinning
  double tau = 1.0;       ///< time-scale ratio entering the general closure integrals (> 0)

  /// Throws std::invalid_argument on any violated range.
  void validate() const;
};

/// Odd power map |d|^(p-1) * d. phi(0, p) = 0 for every p >= 1.
double phi(double d, double p);

/// Pointwise derivative p * |d|^(p-1); 0 at d = 0 for p > 1, 1 at d = 0 for p = 1.
/// Not Lipschitz at 0 for 1 < p < 2; implicit solvers fall back to a finite
/// difference there (see stepper).
double phi_prime(double d, double p);

/// Mobility constant of the shear-thinning flux term,
/// |s_plus|^p / ((p+2) * mu0_plus * tau_half^(p-1)).
/// For p = 1 this is s_plus / (3 mu0_plus) independent of tau_half; for p > 1
/// it vanishes as tau_half -> inf.
double c_p(const FluidParams& params);

/// Shear rate produced by shear stress sigma for the shear-thinning law:
/// (sigma/mu0) * (1 + |sigma/tau_half|^(p-1)). Odd and strictly increasing.
/// Note the p = 1 value is 2*sigma/mu0 (the law's two Newtonian limits, p = 1
/// and tau_half = inf, differ by a factor 2; exposed as-is).
double ellis_psi(double sigma, double mu0, double tau_half, double p);

/// Inverts the stress law s -> mu_of_shear(|s|)*s: returns s with
/// |mu_of_shear(|s|)*s - sigma| <= tol*(1+|sigma|). Odd in sigma by
/// construction. Bracketing bisection plus secant polish.
/// Throws std::runtime_error if the bracketing detects a non-monotone law.
double invert_stress_law(const std::function<double(double)>& mu_of_shear,
                         double sigma, double tol = 1e-12);

}  // namespace bilayer
