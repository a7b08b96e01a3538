#include "bilayer/model.hpp"

#include <cmath>
#include <stdexcept>

namespace bilayer {

MobilityCoefficients mobilities(double f, double g, const FluidParams& params) {
  const double m = params.m, sp = params.s_plus, sm = params.s_minus;
  MobilityCoefficients mob;
  mob.p11 = (sm / 3.0) * f * f * f;
  mob.p12 = m * sp * (f * f * f / 3.0 + 0.5 * f * f * g);
  mob.p21 = mob.p11 + 0.5 * sm * f * f * g;
  mob.p22 = mob.p12 + m * sp * (f * g * g + 0.5 * f * f * g) +
            (sp / (3.0 * params.mu0_plus)) * (g * g * g);
  return mob;
}

FluxPair flux_pair(double f, double g, double f3, double h3,
                   const FluidParams& params) {
  const MobilityCoefficients mob = mobilities(f, g, params);
  FluxPair out;
  out.flux_f = mob.p11 * f3 + mob.p12 * h3;
  out.flux_h = mob.p21 * f3 + mob.p22 * h3 +
               c_p(params) * std::pow(g, params.p + 2.0) * phi(h3, params.p);
  return out;
}

double flux_g(double f, double g, double f3, double h3,
              const FluidParams& params) {
  const double m = params.m, sp = params.s_plus, sm = params.s_minus;
  const double q21 = 0.5 * sm * f * f * g;
  const double q22 = m * sp * (f * g * g + 0.5 * f * f * g) +
                     (sp / (3.0 * params.mu0_plus)) * (g * g * g);
  return q21 * f3 + q22 * h3 +
         c_p(params) * std::pow(g, params.p + 2.0) * phi(h3, params.p);
}

CoefficientMatrix coefficient_matrix(double f, double g, double h3,
                                     const FluidParams& params) {
  const double m = params.m, sp = params.s_plus, sm = params.s_minus;
  const double shear = c_p(params) * std::pow(g, params.p + 2.0) *
                       phi_prime(h3, params.p);
  CoefficientMatrix a;
  a.a11 = ((m * sp + sm) / 3.0) * f * f * f + 0.5 * m * sp * f * f * g;
  a.a12 = m * sp * (f * f * f / 3.0 + 0.5 * f * f * g);
  a.a21 = 0.5 * (m * sp + sm) * f * f * g + m * sp * f * g * g +
          (sp / (3.0 * params.mu0_plus)) * (g * g * g) + shear;
  a.a22 = 0.5 * m * sp * f * f * g + m * sp * f * g * g +
          (sp / (3.0 * params.mu0_plus)) * (g * g * g) + shear;
  return a;
}

Eigenpair det_and_eigenvalues(const CoefficientMatrix& a) {
  Eigenpair out;
  out.det = a.a11 * a.a22 - a.a12 * a.a21;
  const double mean = 0.5 * (a.a11 + a.a22);
  const double half_gap = 0.5 * (a.a11 - a.a22);
  // Cancellation-free discriminant; for this system a12*a21 >= 0, so the
  // eigenvalues are always real.
  const double disc = half_gap * half_gap + a.a12 * a.a21;
  const double root = std::sqrt(std::max(disc, 0.0));
  out.lambda_minus = mean - root;
  out.lambda_plus = mean + root;
  return out;
}

double det_closed_form(double f, double g, double h3,
                       const FluidParams& params) {
  const double m = params.m, sp = params.s_plus, sm = params.s_minus;
  const double f3_ = f * f * f, g3_ = g * g * g;
  return (m * sm * sp / 12.0) * f3_ * f * g * g +
         (sm * sp / (9.0 * params.mu0_plus)) * f3_ * g3_ +
         (c_p(params) * sm / 3.0) * f3_ * std::pow(g, params.p + 2.0) *
             phi_prime(h3, params.p);
}

std::pair<double, double> lower_order_terms(double f, double g, double fx,
                                            double gx, double f3, double h3,
                                            const FluidParams& params) {
  const double m = params.m, sp = params.s_plus, sm = params.s_minus;
  const double f1 =
      m * sp * (f * f * fx + f * g * fx + 0.5 * f * f * gx) * h3 +
      sm * f * f * fx * f3;
  const double f2 =
      m * sp *
          (f * g * fx + 0.5 * f * f * gx + g * g * fx + 2.0 * f * g * gx +
           (1.0 / (m * params.mu0_plus)) * g * g * gx) *
          h3 +
      sm * (f * g * fx + 0.5 * f * f * gx) * f3 +
      c_p(params) * (params.p + 2.0) * std::pow(g, params.p + 1.0) *
          phi(h3, params.p) * gx;
  return {f1, f2};
}

PressurePair pressures(double f_xx, double h_xx, const FluidParams& params) {
  PressurePair out;
  out.p_plus = -params.s_plus * h_xx;
  out.p_minus = -params.m * params.s_plus * h_xx - params.s_minus * f_xx;
  return out;
}

double velocity_at(double f, double g, double f3, double h3,
                   const FluidParams& params, double z) {
  const double h = f + g;
  if (!(z >= 0.0 && z <= h))
    throw std::invalid_argument("velocity_at: z outside [0, f+g]");
  const double m = params.m, sp = params.s_plus, sm = params.s_minus;
  if (z <= f)
    return m * sp * h3 * (h * z - 0.5 * z * z) +
           sm * f3 * (f * z - 0.5 * z * z);
  const double u_interface =
      m * sp * h3 * (h * f - 0.5 * f * f) + sm * f3 * (0.5 * f * f);
  const double w = h - z;  // distance below the free surface, in [0, g)
  const double newtonian = (sp * h3 / (2.0 * params.mu0_plus)) * (g * g - w * w);
  const double shear_thinning =
      c_p(params) * (params.p + 2.0) / (params.p + 1.0) * phi(h3, params.p) *
      (std::pow(g, params.p + 1.0) - std::pow(w, params.p + 1.0));
  return u_interface + newtonian + shear_thinning;
}

std::vector<double> velocity_profiles(double f, double g, double f3, double h3,
                                      const FluidParams& params,
                                      const std::vector<double>& z_samples) {
  std::vector<double> out;
  out.reserve(z_samples.size());
  for (double z : z_samples)
    out.push_back(velocity_at(f, g, f3, h3, params, z));
  return out;
}

}  // namespace bilayer
