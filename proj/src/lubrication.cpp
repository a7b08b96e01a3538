#include "bilayer/lubrication.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace bilayer {

namespace {

// 15-point Gauss-Legendre rule on [-1, 1]; exact through degree 29.
constexpr std::array<double, 15> kNodes = {
    -0.98799251802048538, -0.93727339240070595, -0.84820658341042721,
    -0.72441773136017007, -0.57097217260853883, -0.39415134707756339,
    -0.20119409399743451, 0.0,
    0.20119409399743451,  0.39415134707756339,  0.57097217260853883,
    0.72441773136017007,  0.84820658341042721,  0.93727339240070595,
    0.98799251802048538};

constexpr std::array<double, 15> kWeights = {
    0.030753241996118647, 0.070366047488108069, 0.10715922046717177,
    0.13957067792615391,  0.16626920581699378,  0.18616100001556188,
    0.19843148532711125,  0.2025782419255609,
    0.19843148532711125,  0.18616100001556188,  0.16626920581699378,
    0.13957067792615391,  0.10715922046717177,  0.070366047488108069,
    0.030753241996118647};

double panel(const std::function<double(double)>& fn, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int k = 0; k < 15; ++k) acc += kWeights[k] * fn(mid + half * kNodes[k]);
  return acc * half;
}

double refine(const std::function<double(double)>& fn, double a, double b,
              double whole, double qtol, int depth, int max_depth) {
  const double mid = 0.5 * (a + b);
  const double left = panel(fn, a, mid);
  const double right = panel(fn, mid, b);
  const double split = left + right;
  if (std::abs(split - whole) <= qtol * (1.0 + std::abs(split))) return split;
  if (depth >= max_depth)
    throw std::runtime_error("integrate: max subdivision depth exceeded");
  return refine(fn, a, mid, left, qtol, depth + 1, max_depth) +
         refine(fn, mid, b, right, qtol, depth + 1, max_depth);
}

}  // namespace

ClosurePair newtonian_closure(const FluidParams& params) {
  const double mu0 = params.mu0_plus;
  ClosurePair pair;
  pair.psi_minus = [](double sigma) { return sigma; };
  pair.psi_plus = [mu0](double sigma) { return sigma / mu0; };
  return pair;
}

ClosurePair ellis_closure(const FluidParams& params) {
  const double mu0 = params.mu0_plus, tau_half = params.tau_half, p = params.p;
  ClosurePair pair;
  pair.psi_minus = [](double sigma) { return sigma; };
  pair.psi_plus = [mu0, tau_half, p](double sigma) {
    return ellis_psi(sigma, mu0, tau_half, p);
  };
  return pair;
}

double integrate(const std::function<double(double)>& fn, double a, double b,
                 double qtol, int max_depth) {
  if (a == b) return 0.0;
  return refine(fn, a, b, panel(fn, a, b), qtol, 0, max_depth);
}

double flux_lower_general(double f, double g, double f3, double h3,
                          const FluidParams& params, const ClosurePair& closure,
                          double qtol) {
  const double tau = params.tau;
  const double drive_h = tau * params.m * params.s_plus * h3;
  const double drive_f = tau * params.s_minus * f3;
  auto integrand = [&](double y) {
    return y * closure.psi_minus(drive_h * (g + y * f) + drive_f * y * f);
  };
  return f * f / tau * integrate(integrand, 0.0, 1.0, qtol);
}

double interface_velocity_general(double f, double g, double f3, double h3,
                                  const FluidParams& params,
                                  const ClosurePair& closure, double qtol) {
  const double tau = params.tau;
  const double drive_h = tau * params.m * params.s_plus * h3;
  const double drive_f = tau * params.s_minus * f3;
  auto integrand = [&](double r) {
    return closure.psi_minus(drive_h * (g + r) + drive_f * r);
  };
  return integrate(integrand, 0.0, f, qtol) / tau;
}

double flux_upper_general(double f, double g, double f3, double h3,
                          const FluidParams& params, const ClosurePair& closure,
                          double qtol) {
  const double tau = params.tau;
  const double drive = tau * params.s_plus * h3;
  auto integrand = [&](double r) { return r * closure.psi_plus(drive * r); };
  return g * interface_velocity_general(f, g, f3, h3, params, closure, qtol) +
         integrate(integrand, 0.0, g, qtol) / tau;
}

}  // namespace bilayer
