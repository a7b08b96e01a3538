#pragma once

#include <functional>

#include "bilayer/rheology.hpp"

namespace bilayer {

/// Stress-to-shear-rate responses of the two fluids, both odd and
/// nondecreasing. The closures are expressed in the same rescaled variables
/// as FluidParams: the lower fluid's reference closure is the identity
/// (its viscosity is absorbed into m and s_minus), the upper fluid's
/// Newtonian closure is sigma/mu0_plus.
struct ClosurePair {
  std::function<double(double)> psi_minus;
  std::function<double(double)> psi_plus;
};

/// Identity lower response and Newtonian upper response sigma/mu0_plus.
ClosurePair newtonian_closure(const FluidParams& params);

/// Identity lower response and shear-thinning upper response (ellis_psi).
ClosurePair ellis_closure(const FluidParams& params);

/// Adaptive Gauss-Legendre quadrature of fn over [a, b]: 15-point panels,
/// bisected until the whole-vs-halves estimate difference is below the
/// (relative) tolerance. Throws std::runtime_error when max_depth
/// subdivisions do not suffice.
double integrate(const std::function<double(double)>& fn, double a, double b,
                 double qtol = 1e-10, int max_depth = 40);

/// Cross-sectionally averaged flux of the lower layer for an arbitrary
/// closure:
///   (1/tau) * f^2 * int_0^1 y psi_minus(tau*m*s_plus*h3*(g + y f)
///                                       + tau*s_minus*f3*y*f) dy.
/// f3 and h3 are the third derivatives of f and of f+g. With tau = 1 and the
/// Newtonian closure this reduces to the closed-form mobilities of model.
double flux_lower_general(double f, double g, double f3, double h3,
                          const FluidParams& params, const ClosurePair& closure,
                          double qtol = 1e-10);

/// Lower-fluid velocity at the fluid-fluid interface z = f:
///   (1/tau) * int_0^f psi_minus(tau*m*s_plus*h3*(g + r) + tau*s_minus*f3*r) dr.
double interface_velocity_general(double f, double g, double f3, double h3,
                                  const FluidParams& params,
                                  const ClosurePair& closure,
                                  double qtol = 1e-10);

/// Cross-sectionally averaged flux of the upper layer:
///   g * interface_velocity + (1/tau) * int_0^g r psi_plus(tau*s_plus*h3*r) dr.
/// The interface term carries the lower fluid's motion into the upper layer;
/// without it a Newtonian closure would not reproduce the closed-form model
/// fluxes.
double flux_upper_general(double f, double g, double f3, double h3,
                          const FluidParams& params, const ClosurePair& closure,
                          double qtol = 1e-10);

}  // namespace bilayer
