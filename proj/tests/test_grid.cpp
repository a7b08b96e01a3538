#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "bilayer/grid.hpp"
#include "doctest.h"

using namespace bilayer;

namespace {

const double kPi = 3.14159265358979323846;

// cos(k pi x / L) has zero odd derivatives at both endpoints, so it is
// compatible with the even-reflection ghosts at every node.
std::vector<double> cosine(const Grid& grid, int mode) {
  std::vector<double> v(grid.n);
  for (int i = 0; i < grid.n; ++i)
    v[i] = std::cos(mode * kPi * grid.x(i) / grid.length);
  return v;
}

double max_err(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("make_grid") {
  const Grid grid = make_grid(2.0, 9);
  CHECK(grid.n == 9);
  CHECK(grid.dx == doctest::Approx(0.25));
  CHECK(grid.x(0) == 0.0);
  CHECK(grid.x(8) == doctest::Approx(2.0));
  CHECK_THROWS_AS(make_grid(0.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(-1.0, 16), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1.0, 7), std::invalid_argument);
}

TEST_CASE("ghost_extend: even reflection about both endpoint nodes") {
  const std::vector<double> v = {10, 11, 12, 13, 14, 15};
  const std::vector<double> e = ghost_extend(v);
  REQUIRE(e.size() == v.size() + 4);
  CHECK(e[0] == 12);  // v[-2] = v[2]
  CHECK(e[1] == 11);  // v[-1] = v[1]
  for (size_t i = 0; i < v.size(); ++i) CHECK(e[i + 2] == v[i]);
  CHECK(e[8] == 14);  // v[n]   = v[n-2]
  CHECK(e[9] == 13);  // v[n+1] = v[n-3]
}

TEST_CASE("derivatives are exactly zero on constants") {
  const Grid grid = make_grid(1.0, 33);
  const std::vector<double> c(grid.n, 0.7531);
  for (double v : d2(c, grid)) CHECK(v == 0.0);
  for (double v : d4(c, grid)) CHECK(v == 0.0);
  for (double v : d1(c, grid)) CHECK(v == 0.0);
  for (double v : d3_faces(c, grid)) CHECK(v == 0.0);
}

TEST_CASE("derivative stencils converge at second order on cosine modes") {
  // halving dx should cut the max error by about 4
  auto errors = [](int n) {
    const Grid grid = make_grid(1.0, n);
    const std::vector<double> v = cosine(grid, 2);
    const double k = 2.0 * kPi;

    std::vector<double> exact1(grid.n), exact2(grid.n), exact4(grid.n);
    for (int i = 0; i < grid.n; ++i) {
      const double x = grid.x(i);
      exact1[i] = -k * std::sin(k * x);
      exact2[i] = -k * k * std::cos(k * x);
      exact4[i] = k * k * k * k * std::cos(k * x);
    }
    std::vector<double> exact3f(grid.n - 1);
    for (int i = 0; i + 1 < grid.n; ++i) {
      const double xf = grid.x(i) + 0.5 * grid.dx;
      exact3f[i] = k * k * k * std::sin(k * xf);
    }
    return std::vector<double>{
        max_err(d1(v, grid), exact1), max_err(d2(v, grid), exact2),
        max_err(d3_faces(v, grid), exact3f), max_err(d4(v, grid), exact4)};
  };

  const std::vector<double> coarse = errors(65), fine = errors(129);
  for (size_t i = 0; i < coarse.size(); ++i) {
    CAPTURE(i);
    CHECK(coarse[i] / fine[i] > 3.4);
    CHECK(coarse[i] / fine[i] < 4.6);
  }
}

TEST_CASE("d4 is the composition of d2 with itself") {
  const Grid grid = make_grid(1.5, 41);
  std::mt19937 gen(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(grid.n);
  for (double& x : v) x = dist(gen);
  const std::vector<double> once = d2(v, grid);
  const std::vector<double> twice = d2(once, grid);
  const std::vector<double> fourth = d4(v, grid);
  for (int i = 0; i < grid.n; ++i) CHECK(fourth[i] == twice[i]);
}

TEST_CASE("divergence_of_flux") {
  const Grid grid = make_grid(1.0, 64);

  SUBCASE("argument size is checked") {
    CHECK_THROWS_AS(divergence_of_flux(std::vector<double>(10), grid),
                    std::invalid_argument);
  }

  SUBCASE("telescoping: weighted rates sum to zero for arbitrary fluxes") {
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> flux(grid.n - 1);
    for (double& j : flux) j = dist(gen);
    const std::vector<double> rate = divergence_of_flux(flux, grid);
    REQUIRE(static_cast<int>(rate.size()) == grid.n);
    // Trapezoid weights: the wall nodes own half cells.
    double sum = 0.5 * (rate.front() + rate.back());
    for (int i = 1; i + 1 < grid.n; ++i) sum += rate[i];
    CHECK(std::abs(sum) < 1e-11);  // fp residue of the pairwise cancellation
  }

  SUBCASE("interior divergence of a linear face profile is constant") {
    std::vector<double> flux(grid.n - 1);
    for (int i = 0; i + 1 < grid.n; ++i)
      flux[i] = 2.0 * (grid.x(i) + 0.5 * grid.dx);
    const std::vector<double> rate = divergence_of_flux(flux, grid);
    for (int i = 1; i + 1 < grid.n; ++i)
      CHECK(rate[i] == doctest::Approx(-2.0).epsilon(1e-10));
    // boundary nodes balance a half-width cell against the zero-flux wall
    CHECK(rate[0] == doctest::Approx(-2.0 * flux[0] / grid.dx));
    CHECK(rate[grid.n - 1] ==
          doctest::Approx(2.0 * flux[grid.n - 2] / grid.dx));
  }
}
