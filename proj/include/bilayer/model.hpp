#pragma once

#include <utility>
#include <vector>

#include "bilayer/rheology.hpp"

namespace bilayer {

/// Height-dependent mobilities of the divergence-form system
///   f_t + (p11 f_xxx + p12 h_xxx)_x = 0
///   h_t + (p21 f_xxx + p22 h_xxx + C_p g^(p+2) Phi(h_xxx))_x = 0,   h = f+g.
/// Identities: p21 - p11 = (s_minus/2) f^2 g,
///             p22 - p12 = m s_plus (f g^2 + f^2 g / 2) + (s_plus/(3 mu0_plus)) g^3.
struct MobilityCoefficients {
  double p11, p12, p21, p22;
};

/// Entries of the quasilinear coefficient matrix A(u, u_xxx) acting on
/// (f, g) fourth derivatives. Identities: a11 - a12 = (s_minus/3) f^3,
/// a21 - a22 = (s_minus/2) f^2 g. Positive determinant for f, g > 0.
struct CoefficientMatrix {
  double a11, a12, a21, a22;
};

struct FluxPair {
  double flux_f;  ///< flux of the lower layer
  double flux_h;  ///< flux of the total height f+g
};

struct Eigenpair {
  double det;
  double lambda_minus, lambda_plus;
};

struct PressurePair {
  double p_minus, p_plus;
};

MobilityCoefficients mobilities(double f, double g, const FluidParams& params);

/// Closed-form fluxes (J_f, J_h). g is assumed nonnegative.
FluxPair flux_pair(double f, double g, double f3, double h3,
                   const FluidParams& params);

/// Flux of the upper layer alone, J_h - J_f in closed form:
///   (s_minus/2) f^2 g f3 + (m s_plus (f g^2 + f^2 g/2) + s_plus g^3/(3 mu0_plus)) h3
///   + C_p g^(p+2) Phi(h3).
double flux_g(double f, double g, double f3, double h3,
              const FluidParams& params);

CoefficientMatrix coefficient_matrix(double f, double g, double h3,
                                     const FluidParams& params);

/// det = a11 a22 - a12 a21; eigenvalues from the trace and the cancellation-free
/// discriminant (a11-a22)^2/4 + a12 a21. Real, ordered, both positive for
/// positive heights.
Eigenpair det_and_eigenvalues(const CoefficientMatrix& a);

/// Determinant of coefficient_matrix(f, g, h3, params) in product form:
///   (m s_minus s_plus/12) f^4 g^2 + (s_minus s_plus/(9 mu0_plus)) f^3 g^3
///   + (C_p s_minus/3) f^3 g^(p+2) Phi'(h3).
double det_closed_form(double f, double g, double h3,
                       const FluidParams& params);

/// First-derivative (transport) terms of the quasilinear expansion:
/// d/dx of the fluxes of (f, g) equals A * (f_xxxx, g_xxxx) + (F1, F2).
std::pair<double, double> lower_order_terms(double f, double g, double fx,
                                            double gx, double f3, double h3,
                                            const FluidParams& params);

/// p_plus = -s_plus * h_xx, p_minus = -m s_plus * h_xx - s_minus * f_xx.
PressurePair pressures(double f_xx, double h_xx, const FluidParams& params);

/// Horizontal velocity at height z in [0, f+g]; the two branches are
/// continuous at the fluid-fluid interface z = f.
/// Throws std::invalid_argument for z outside [0, f+g].
double velocity_at(double f, double g, double f3, double h3,
                   const FluidParams& params, double z);

std::vector<double> velocity_profiles(double f, double g, double f3, double h3,
                                      const FluidParams& params,
                                      const std::vector<double>& z_samples);

}  // namespace bilayer
