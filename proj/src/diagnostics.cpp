#include "bilayer/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bilayer {

namespace {

double trapezoid(const std::vector<double>& v, const Grid& grid) {
  double acc = 0.5 * (v.front() + v.back());
  for (int i = 1; i + 1 < grid.n; ++i) acc += v[i];
  return acc * grid.dx;
}

std::vector<double> field_sum(const std::vector<double>& a,
                              const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

double energy_form(const std::vector<double>& f, const std::vector<double>& g,
                   const FluidParams& params, const Grid& grid) {
  const std::vector<double> fx = d1(f, grid);
  const std::vector<double> hx = d1(field_sum(f, g), grid);
  const double weight = params.s_minus / (params.m * params.s_plus);
  std::vector<double> density(grid.n);
  for (int i = 0; i < grid.n; ++i)
    density[i] = hx[i] * hx[i] + weight * fx[i] * fx[i];
  return 0.5 * trapezoid(density, grid);
}

}  // namespace

double mass(const std::vector<double>& v, const Grid& grid) {
  return trapezoid(v, grid);
}

double energy(const State& state, const FluidParams& params, const Grid& grid) {
  return energy_form(state.f, state.g, params, grid);
}

double dissipation(const State& state, const FluidParams& params,
                   const Grid& grid) {
  const double m = params.m, sp = params.s_plus, sm = params.s_minus;
  const double msp = m * sp;
  const double root_msp = std::sqrt(msp);
  const double cp = c_p(params);
  const std::vector<double> f3 = d3(state.f, grid);
  const std::vector<double> h3 = d3(field_sum(state.f, state.g), grid);
  std::vector<double> density(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double f = state.f[i], g = state.g[i];
    const double mixed = sm * f3[i] + msp * h3[i];
    const double upper = cp * std::pow(g, params.p + 2.0) *
                             std::pow(std::abs(h3[i]), params.p + 1.0) +
                         (sp / (3.0 * params.mu0_plus)) * g * g * g * h3[i] *
                             h3[i];
    const double coupled = f * mixed / (2.0 * root_msp) + root_msp * g * h3[i];
    const double lower = f * f * f * mixed * mixed / (12.0 * msp);
    density[i] = upper + f * coupled * coupled + lower;
  }
  return trapezoid(density, grid);
}

double relative_energy(const State& a, const State& b,
                       const FluidParams& params, const Grid& grid) {
  const std::size_t n = static_cast<std::size_t>(grid.n);
  if (a.f.size() != n || a.g.size() != n || b.f.size() != n ||
      b.g.size() != n)
    throw std::invalid_argument("relative_energy: grid mismatch");
  std::vector<double> df(n), dg(n);
  for (std::size_t i = 0; i < n; ++i) {
    df[i] = a.f[i] - b.f[i];
    dg[i] = a.g[i] - b.g[i];
  }
  return energy_form(df, dg, params, grid);
}

DiagnosticsRecord make_record(const State& state, const FluidParams& params,
                              const Grid& grid) {
  DiagnosticsRecord rec;
  rec.t = state.t;
  rec.mass_f = mass(state.f, grid);
  rec.mass_g = mass(state.g, grid);
  rec.energy = energy(state, params, grid);
  rec.dissipation = dissipation(state, params, grid);
  rec.min_f = *std::min_element(state.f.begin(), state.f.end());
  rec.min_g = *std::min_element(state.g.begin(), state.g.end());
  const double f_mean = trapezoid(state.f, grid) / grid.length;
  const double g_mean = trapezoid(state.g, grid) / grid.length;
  std::vector<double> density(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double uf = state.f[i] - f_mean, ug = state.g[i] - g_mean;
    density[i] = uf * uf + ug * ug;
  }
  rec.perturbation_norm = std::sqrt(trapezoid(density, grid));
  return rec;
}

DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 10)
    throw std::invalid_argument("fit_decay_rate: need at least 10 samples");
  const double n = static_cast<double>(series.size());
  double t_mean = 0.0, y_mean = 0.0;
  for (const auto& [t, norm] : series) {
    if (!(norm > 0.0))
      throw std::invalid_argument("fit_decay_rate: norms must be positive");
    t_mean += t;
    y_mean += std::log(norm);
  }
  t_mean /= n;
  y_mean /= n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (const auto& [t, norm] : series) {
    const double dt = t - t_mean, dy = std::log(norm) - y_mean;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  if (!(stt > 0.0))
    throw std::invalid_argument("fit_decay_rate: times must not coincide");
  DecayFit fit;
  fit.rate = sty / stt;
  // All residual variance explained when the samples are (numerically)
  // constant in log.
  fit.r_squared = syy <= 1e-300 ? 1.0 : (sty * sty) / (stt * syy);
  return fit;
}

}  // namespace bilayer
