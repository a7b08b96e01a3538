#include "bilayer/stability.hpp"

#include <cmath>

namespace bilayer {

CoefficientMatrix flat_matrix(double f_star, double g_star,
                              const FluidParams& params) {
  return coefficient_matrix(f_star, g_star, 0.0, params);
}

std::vector<ModeRate> modal_decay_rates(double lambda_minus,
                                        double lambda_plus, double length,
                                        int n_modes) {
  std::vector<ModeRate> rates;
  rates.reserve(n_modes);
  const double pi = 3.14159265358979323846;
  for (int n = 1; n <= n_modes; ++n) {
    const double k = n * pi / length;
    const double k4 = k * k * k * k;
    rates.push_back(ModeRate{n, lambda_minus * k4, lambda_plus * k4});
  }
  return rates;
}

double ellipticity_constant(double f, double g, const FluidParams& params) {
  const double f3 = f * f * f, g3 = g * g * g;
  const double first = params.s_plus * g3 / (6.0 * params.mu0_plus);
  const double second = params.s_minus * params.s_minus * f3 * g3 /
                        (6.0 * params.m * params.s_plus *
                         (params.mu0_plus * f3 + 2.0 * g3));
  return std::min(first, second);
}

StabilityReport stability_report(double f_star, double g_star,
                                 const FluidParams& params, double length,
                                 int n_modes) {
  StabilityReport report;
  report.f_star = f_star;
  report.g_star = g_star;
  report.a_star = flat_matrix(f_star, g_star, params);
  const Eigenpair eig = det_and_eigenvalues(report.a_star);
  report.lambda_minus = eig.lambda_minus;
  report.lambda_plus = eig.lambda_plus;
  report.mode_rates =
      modal_decay_rates(eig.lambda_minus, eig.lambda_plus, length, n_modes);
  report.kappa_pred = report.mode_rates.empty()
                          ? 0.0
                          : report.mode_rates.front().rate_minus;
  report.epsilon_ellipticity = ellipticity_constant(f_star, g_star, params);
  return report;
}

}  // namespace bilayer
