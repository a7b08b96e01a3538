#pragma once

#include <vector>

#include "bilayer/grid.hpp"
#include "bilayer/rheology.hpp"

namespace bilayer {

struct DiagnosticsRecord {
  double t;
  double mass_f, mass_g;
  double energy;
  double dissipation;
  double min_f, min_g;
  double perturbation_norm;  ///< L2 distance of (f, g) to their spatial means
};

/// Trapezoid-weighted sum of v, the discrete functional conserved exactly by
/// divergence_of_flux updates.
double mass(const std::vector<double>& v, const Grid& grid);

/// E = 1/2 int |h_x|^2 + (s_minus/(m s_plus)) |f_x|^2 dx, h = f+g,
/// trapezoid quadrature with central first derivatives.
double energy(const State& state, const FluidParams& params, const Grid& grid);

/// Decay rate of E in sum-of-squares form, each term nonnegative:
///   int C_p g^(p+2) |h3|^(p+1) + (s_plus/(3 mu0_plus)) g^3 |h3|^2 dx
/// + int f |f (s_minus f3 + m s_plus h3)/(2 sqrt(m s_plus))
///        + sqrt(m s_plus) g h3|^2 dx
/// + int f^3 |s_minus f3 + m s_plus h3|^2 / (12 m s_plus) dx.
double dissipation(const State& state, const FluidParams& params,
                   const Grid& grid);

/// The energy quadratic form applied to the difference of two states on the
/// same grid. Zero iff the derivative fields coincide; symmetric.
/// Throws std::invalid_argument on grid mismatch.
double relative_energy(const State& a, const State& b,
                       const FluidParams& params, const Grid& grid);

DiagnosticsRecord make_record(const State& state, const FluidParams& params,
                              const Grid& grid);

struct DecayFit {
  double rate;       ///< least-squares slope of log(norm) vs t
  double r_squared;
};

/// Fits log(norm) = a + rate * t. Requires >= 10 samples, all norms > 0
/// (throws std::invalid_argument otherwise).
DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& series);

}  // namespace bilayer
