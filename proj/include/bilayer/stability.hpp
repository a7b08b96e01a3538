#pragma once

#include <vector>

#include "bilayer/model.hpp"
#include "bilayer/rheology.hpp"

namespace bilayer {

struct ModeRate {
  int n;
  double rate_minus;  ///< lambda_minus * (n pi / L)^4
  double rate_plus;   ///< lambda_plus  * (n pi / L)^4
};

struct StabilityReport {
  double f_star, g_star;
  CoefficientMatrix a_star;
  double lambda_minus, lambda_plus;
  std::vector<ModeRate> mode_rates;
  double kappa_pred;           ///< slowest decay rate, lambda_minus * (pi/L)^4
  double epsilon_ellipticity;
};

/// Coefficient matrix of the flat state (f*, g*): all derivative arguments
/// zero. For p > 1 the shear-thinning term drops out (phi_prime(0) = 0);
/// for p = 1 it contributes C_1 * g^3 to the second row.
CoefficientMatrix flat_matrix(double f_star, double g_star,
                              const FluidParams& params);

/// Per-mode decay rates of cosine perturbations cos(n pi x / L), which
/// diagonalize the linearized fourth-order operator under the zero
/// odd-derivative boundary conditions.
std::vector<ModeRate> modal_decay_rates(double lambda_minus,
                                        double lambda_plus, double length,
                                        int n_modes);

/// min( s_plus g^3 / (6 mu0_plus),
///      s_minus^2 f^3 g^3 / (6 m s_plus (mu0_plus f^3 + 2 g^3)) ),
/// the constant for which eps*(A^2 + (A+B)^2) is dominated by the two
/// quadratic dissipation terms. The bound is guaranteed for viscosity
/// ratios m <= 1; for m > 1 this closed form can exceed the true constant.
double ellipticity_constant(double f, double g, const FluidParams& params);

StabilityReport stability_report(double f_star, double g_star,
                                 const FluidParams& params, double length,
                                 int n_modes);

}  // namespace bilayer
