#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "bilayer/diagnostics.hpp"
#include "bilayer/stability.hpp"
#include "bilayer/stepper.hpp"
#include "doctest.h"

using namespace bilayer;

namespace {

const double kPi = 3.14159265358979323846;
const double kKappaUnit = 6.456189044094563;  // lambda_minus * pi^4

// Fitted decay rate of a single-cosine perturbation of the unit flat state,
// semi-implicit stepping, fit window past the fast-mode transient.
double measured_rate(int n, double dt, double amp, int mode, double t_end) {
  const Grid grid = make_grid(1.0, n);
  State state;
  state.f.resize(n);
  state.g.assign(n, 1.0);
  for (int i = 0; i < n; ++i)
    state.f[i] = 1.0 + amp * std::cos(mode * kPi * grid.x(i));

  StepConfig config;
  config.scheme = Scheme::semi_implicit;
  config.dt0 = config.dt_max = dt;
  config.dt_min = 0.999 * dt;

  const AdvanceResult result =
      advance(state, t_end, config, FluidParams{}, grid);
  REQUIRE(result.outcome.status == StepStatus::ok);

  std::vector<std::pair<double, double>> series;
  for (const DiagnosticsRecord& rec : result.series)
    if (rec.t >= 0.1 * t_end) series.emplace_back(rec.t, rec.perturbation_norm);
  return -fit_decay_rate(series).rate;
}

}  // namespace

TEST_CASE("flat_matrix: frozen unit case") {
  const CoefficientMatrix a = flat_matrix(1.0, 1.0, FluidParams{});
  CHECK(a.a11 == doctest::Approx(7.0 / 6.0).epsilon(1e-15));
  CHECK(a.a12 == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(a.a21 == doctest::Approx(7.0 / 3.0).epsilon(1e-15));
  CHECK(a.a22 == doctest::Approx(11.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("flat_matrix: shear term survives only at p = 1") {
  FluidParams params;
  params.p = 1.0;
  // phi_prime(0) = 1 at p = 1, so C_1 g^3 = s+/(3 mu0+) enters the g-row
  const CoefficientMatrix a = flat_matrix(1.0, 1.0, params);
  CHECK(a.a21 == doctest::Approx(7.0 / 3.0 + 1.0 / 3.0).epsilon(1e-14));
  CHECK(a.a22 == doctest::Approx(11.0 / 6.0 + 1.0 / 3.0).epsilon(1e-14));

  for (double p : {1.5, 2.0, 4.0}) {
    params.p = p;
    const CoefficientMatrix b = flat_matrix(1.0, 1.0, params);
    CHECK(b.a21 == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
    CHECK(b.a22 == doctest::Approx(11.0 / 6.0).epsilon(1e-14));
  }
}

TEST_CASE("flat_matrix: eigenvalues positive across parameter space") {
  std::mt19937 gen(47);
  std::uniform_real_distribution<double> height(0.05, 5.0);
  std::uniform_real_distribution<double> coeff(0.1, 5.0);
  std::uniform_real_distribution<double> expo(1.0, 3.5);
  for (int trial = 0; trial < 10000; ++trial) {
    FluidParams params;
    params.m = coeff(gen);
    params.s_plus = coeff(gen);
    params.s_minus = coeff(gen);
    params.mu0_plus = coeff(gen);
    params.tau_half = coeff(gen);
    params.p = expo(gen);
    const Eigenpair eig =
        det_and_eigenvalues(flat_matrix(height(gen), height(gen), params));
    CHECK(eig.lambda_minus > 0.0);
    CHECK(eig.det > 0.0);
  }
}

TEST_CASE("modal_decay_rates: quartic wavenumber scaling") {
  const std::vector<ModeRate> rates = modal_decay_rates(0.5, 2.0, 1.0, 4);
  REQUIRE(rates.size() == 4);
  CHECK(rates[0].n == 1);
  CHECK(rates[0].rate_minus == doctest::Approx(0.5 * std::pow(kPi, 4)));
  CHECK(rates[0].rate_plus == doctest::Approx(2.0 * std::pow(kPi, 4)));
  CHECK(rates[1].rate_minus / rates[0].rate_minus ==
        doctest::Approx(16.0).epsilon(1e-12));
  CHECK(rates[3].rate_minus / rates[0].rate_minus ==
        doctest::Approx(256.0).epsilon(1e-12));

  // doubling the domain divides every rate by 16
  const std::vector<ModeRate> wide = modal_decay_rates(0.5, 2.0, 2.0, 2);
  CHECK(wide[0].rate_minus ==
        doctest::Approx(rates[0].rate_minus / 16.0).epsilon(1e-12));
}

TEST_CASE("ellipticity_constant") {
  CHECK(ellipticity_constant(1.0, 1.0, FluidParams{}) ==
        doctest::Approx(1.0 / 18.0).epsilon(1e-14));

  FluidParams params;
  params.m = 2.0;
  params.s_plus = 3.0;
  params.s_minus = 0.5;
  params.mu0_plus = 0.7;
  const double f = 1.3, g = 0.6;
  const double first = 3.0 * g * g * g / (6.0 * 0.7);
  const double second = 0.25 * std::pow(f * g, 3) /
                        (6.0 * 2.0 * 3.0 * (0.7 * f * f * f + 2.0 * g * g * g));
  CHECK(ellipticity_constant(f, g, params) ==
        doctest::Approx(std::min(first, second)).epsilon(1e-13));
  CHECK(ellipticity_constant(f, g, params) > 0.0);
}

TEST_CASE("stability_report: unit flat state") {
  const StabilityReport report =
      stability_report(1.0, 1.0, FluidParams{}, 1.0, 6);
  CHECK(report.f_star == 1.0);
  CHECK(report.g_star == 1.0);
  CHECK(report.lambda_minus ==
        doctest::Approx(0.06627912215956222).epsilon(1e-13));
  CHECK(report.lambda_plus ==
        doctest::Approx(2.933720877840438).epsilon(1e-13));
  CHECK(report.kappa_pred == doctest::Approx(kKappaUnit).epsilon(1e-12));
  CHECK(report.epsilon_ellipticity ==
        doctest::Approx(1.0 / 18.0).epsilon(1e-14));
  REQUIRE(report.mode_rates.size() == 6);
  CHECK(report.kappa_pred ==
        doctest::Approx(report.mode_rates.front().rate_minus));
}

TEST_CASE("nonlinear decay approaches the linear prediction" *
          doctest::timeout(120)) {
  // Amplitude sweep at fixed resolution: every rate sits near the predicted
  // kappa (up to the O(dx^2) discretization bias), and the amplitude-induced
  // shift shrinks linearly as the perturbation enters the linear regime.
  const double r3 = measured_rate(128, 1e-4, 1e-3, 1, 0.2);
  const double r4 = measured_rate(128, 1e-4, 1e-4, 1, 0.2);
  const double r5 = measured_rate(128, 1e-4, 1e-5, 1, 0.2);

  CHECK(std::abs(r3 - kKappaUnit) / kKappaUnit < 0.02);
  CHECK(std::abs(r4 - kKappaUnit) / kKappaUnit < 0.02);
  CHECK(std::abs(r5 - kKappaUnit) / kKappaUnit < 0.02);

  const double shift_coarse = std::abs(r3 - r4);
  const double shift_fine = std::abs(r4 - r5);
  CHECK(shift_coarse < 0.003 * kKappaUnit);
  CHECK(shift_fine < shift_coarse);
}

TEST_CASE("second mode decays sixteen times faster" * doctest::timeout(120)) {
  const double r2 = measured_rate(256, 2e-5, 1e-4, 2, 0.0125);
  CHECK(std::abs(r2 - 16.0 * kKappaUnit) / (16.0 * kKappaUnit) < 0.02);
}
