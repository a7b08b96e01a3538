#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "bilayer/diagnostics.hpp"
#include "bilayer/grid.hpp"
#include "bilayer/model.hpp"
#include "doctest.h"

using namespace bilayer;

namespace {

const double kPi = 3.14159265358979323846;

State cosine_state(const Grid& grid, double f0, double af, int nf, double g0,
                   double ag, int ng) {
  State state;
  state.f.resize(grid.n);
  state.g.resize(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    state.f[i] = f0 + af * std::cos(nf * kPi * x / grid.length);
    state.g[i] = g0 + ag * std::cos(ng * kPi * x / grid.length);
  }
  return state;
}

}  // namespace

TEST_CASE("mass: trapezoid-weighted sum") {
  const Grid grid = make_grid(1.0, 11);
  REQUIRE(grid.dx == doctest::Approx(0.1));
  std::vector<double> v(11, 2.0);
  CHECK(mass(v, grid) == doctest::Approx(2.0));
  v[0] = 12.0;  // wall node carries half weight
  CHECK(mass(v, grid) == doctest::Approx(2.5));
}

TEST_CASE("energy of a single-mode surface") {
  // constant f, h = g + f = 1.6 + a cos(pi x): E = a^2 pi^2 / 4
  const Grid grid = make_grid(1.0, 513);
  const State state = cosine_state(grid, 0.7, 0.0, 1, 0.9, 0.37, 1);
  const FluidParams params;
  const double exact = 0.37 * 0.37 * kPi * kPi / 4.0;  // 0.3377872106272833
  CHECK(energy(state, params, grid) ==
        doctest::Approx(exact).epsilon(1e-4));

  // the interface term enters with weight s_minus/(m s_plus)
  FluidParams weighted;
  weighted.m = 2.0;
  weighted.s_plus = 0.5;
  weighted.s_minus = 3.0;
  const State tilted = cosine_state(grid, 0.7, 0.2, 1, 0.9, -0.2, 1);
  // h is flat, only f_x contributes: E = (s-/(m s+)) * a^2 pi^2 / 4
  const double interface_only = 3.0 / (2.0 * 0.5) * 0.2 * 0.2 * kPi * kPi / 4.0;
  CHECK(energy(tilted, weighted, grid) ==
        doctest::Approx(interface_only).epsilon(1e-4));
}

TEST_CASE("dissipation equals the flux-gradient pairing") {
  // The sum-of-squares integrand must agree with J_h*h3 + r*J_f*f3 built
  // from the closed-form fluxes, r = s_minus/(m s_plus).
  const Grid grid = make_grid(1.0, 257);
  std::mt19937 gen(43);
  std::uniform_real_distribution<double> coeff(0.3, 2.5);

  for (double p : {1.0, 1.5, 2.0}) {
    FluidParams params;
    params.m = coeff(gen);
    params.s_plus = coeff(gen);
    params.s_minus = coeff(gen);
    params.mu0_plus = coeff(gen);
    params.tau_half = coeff(gen);
    params.p = p;
    const State state = cosine_state(grid, 1.2, 0.25, 1, 1.0, 0.2, 2);

    const std::vector<double> f3 = d3(state.f, grid);
    std::vector<double> h(grid.n);
    for (int i = 0; i < grid.n; ++i) h[i] = state.f[i] + state.g[i];
    const std::vector<double> h3 = d3(h, grid);

    std::vector<double> integrand(grid.n);
    const double r = params.s_minus / (params.m * params.s_plus);
    for (int i = 0; i < grid.n; ++i) {
      const FluxPair flux =
          flux_pair(state.f[i], state.g[i], f3[i], h3[i], params);
      integrand[i] = flux.flux_h * h3[i] + r * flux.flux_f * f3[i];
    }
    double pairing = 0.0;  // trapezoid, matching the library quadrature
    for (int i = 0; i + 1 < grid.n; ++i)
      pairing += 0.5 * grid.dx * (integrand[i] + integrand[i + 1]);

    CAPTURE(p);
    CHECK(dissipation(state, params, grid) ==
          doctest::Approx(pairing).epsilon(1e-10));
    CHECK(dissipation(state, params, grid) >= 0.0);
  }
}

TEST_CASE("relative_energy") {
  const Grid grid = make_grid(1.0, 129);
  const FluidParams params;
  const State a = cosine_state(grid, 1.0, 0.1, 1, 1.0, 0.05, 2);

  SUBCASE("zero on identical states") {
    CHECK(relative_energy(a, a, params, grid) == 0.0);
  }
  SUBCASE("invariant under constant shifts") {
    State shifted = a;
    for (double& v : shifted.f) v += 0.37;
    CHECK(relative_energy(a, shifted, params, grid) ==
          doctest::Approx(0.0));
  }
  SUBCASE("symmetric and positive when derivatives differ") {
    const State b = cosine_state(grid, 1.0, 0.12, 1, 1.0, 0.05, 2);
    const double ab = relative_energy(a, b, params, grid);
    const double ba = relative_energy(b, a, params, grid);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-14));
    CHECK(ab > 0.0);
  }
  SUBCASE("grid mismatch is rejected") {
    const Grid other = make_grid(1.0, 65);
    const State b = cosine_state(other, 1.0, 0.1, 1, 1.0, 0.05, 2);
    CHECK_THROWS_AS(relative_energy(a, b, params, other),
                    std::invalid_argument);
  }
}

TEST_CASE("make_record: perturbation norm of a pure cosine") {
  // f = 1 + a cos(pi x), g flat: the deviation from the mean is exactly the
  // cosine, whose L2 norm over [0,1] is a/sqrt(2).
  const Grid grid = make_grid(1.0, 257);
  const double a = 1e-4;
  const State state = cosine_state(grid, 1.0, a, 1, 1.0, 0.0, 1);
  const DiagnosticsRecord rec = make_record(state, FluidParams{}, grid);

  CHECK(rec.perturbation_norm ==
        doctest::Approx(a / std::sqrt(2.0)).epsilon(1e-4));
  CHECK(rec.min_f == doctest::Approx(1.0 - a).epsilon(1e-9));
  CHECK(rec.min_g == 1.0);
  CHECK(rec.mass_f == doctest::Approx(mass(state.f, grid)));
  CHECK(rec.mass_g == doctest::Approx(mass(state.g, grid)));
  CHECK(rec.t == state.t);
  CHECK(rec.energy == doctest::Approx(energy(state, FluidParams{}, grid)));
}

TEST_CASE("fit_decay_rate") {
  SUBCASE("recovers an exact exponential") {
    std::vector<std::pair<double, double>> series;
    for (int i = 0; i < 50; ++i) {
      const double t = 0.02 * i;
      series.emplace_back(t, 3.0 * std::exp(-2.5 * t));
    }
    const DecayFit fit = fit_decay_rate(series);
    CHECK(fit.rate == doctest::Approx(-2.5).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("r_squared degrades for non-exponential data") {
    std::vector<std::pair<double, double>> series;
    for (int i = 0; i < 50; ++i) {
      const double t = 0.02 * i;
      series.emplace_back(t, 1.0 / (1.0 + 10.0 * t));
    }
    const DecayFit fit = fit_decay_rate(series);
    CHECK(fit.r_squared < 0.99);
  }
  SUBCASE("input validation") {
    std::vector<std::pair<double, double>> series;
    for (int i = 0; i < 9; ++i) series.emplace_back(i, 1.0);
    CHECK_THROWS_AS(fit_decay_rate(series), std::invalid_argument);

    series.emplace_back(9.0, 0.0);  // 10 samples but one zero norm
    CHECK_THROWS_AS(fit_decay_rate(series), std::invalid_argument);

    std::vector<std::pair<double, double>> repeated(12, {1.0, 2.0});
    CHECK_THROWS_AS(fit_decay_rate(repeated), std::invalid_argument);
  }
}
