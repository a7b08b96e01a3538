#include "bilayer/rheology.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bilayer {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument("FluidParams: " + msg);
}

}  // namespace

void FluidParams::validate() const {
  require(std::isfinite(m) && m > 0.0, "m must be positive and finite");
  require(std::isfinite(s_plus) && s_plus > 0.0,
          "s_plus must be positive and finite");
  require(std::isfinite(s_minus) && s_minus > 0.0,
          "s_minus must be positive and finite");
  require(std::isfinite(mu0_plus) && mu0_plus > 0.0,
          "mu0_plus must be positive and finite");
  require(tau_half > 0.0 && !std::isnan(tau_half),
          "tau_half must be positive (inf allowed)");
  require(std::isfinite(p) && p >= 1.0, "p must be >= 1");
  require(std::isfinite(tau) && tau > 0.0, "tau must be positive and finite");
}

double phi(double d, double p) {
  if (d == 0.0) return 0.0;
  return std::pow(std::abs(d), p - 1.0) * d;
}

double phi_prime(double d, double p) {
  if (d == 0.0) return p == 1.0 ? 1.0 : 0.0;
  return p * std::pow(std::abs(d), p - 1.0);
}

double c_p(const FluidParams& params) {
  // pow(inf, 0) = 1 makes the p = 1 value independent of tau_half, and
  // pow(inf, p-1) = inf collapses the constant to 0 in the Newtonian limit.
  return std::pow(std::abs(params.s_plus), params.p) /
         ((params.p + 2.0) * params.mu0_plus *
          std::pow(params.tau_half, params.p - 1.0));
}

double ellis_psi(double sigma, double mu0, double tau_half, double p) {
  if (sigma == 0.0) return 0.0;
  return sigma / mu0 * (1.0 + std::pow(std::abs(sigma / tau_half), p - 1.0));
}

double invert_stress_law(const std::function<double(double)>& mu_of_shear,
                         double sigma, double tol) {
  if (sigma == 0.0) return 0.0;
  const double target = std::abs(sigma);
  const double sign = sigma > 0.0 ? 1.0 : -1.0;
  auto law = [&](double s) { return mu_of_shear(std::abs(s)) * s; };

  // Bracket [lo, hi] by doubling; monotonicity is checked along the way.
  double hi = 1.0;
  double prev = law(hi);
  if (prev < 0.0)
    throw std::runtime_error("invert_stress_law: non-monotone law");
  int guard = 0;
  while (prev < target) {
    hi *= 2.0;
    // A shear this large has no representable inverse; bounded laws (which
    // can never reach the target) are caught here rather than returning inf.
    if (!std::isfinite(hi))
      throw std::runtime_error("invert_stress_law: bracketing failed");
    const double cur = law(hi);
    if (std::isnan(cur))
      throw std::runtime_error("invert_stress_law: bracketing failed");
    if (cur < prev)
      throw std::runtime_error("invert_stress_law: non-monotone law");
    prev = cur;
    if (++guard > 2000)
      throw std::runtime_error("invert_stress_law: bracketing failed");
  }
  double lo = 0.0, flo = 0.0, fhi = prev;

  // Bisection to convergence, with a secant refinement inside the bracket.
  double s = 0.5 * hi;
  for (int it = 0; it < 200; ++it) {
    double fs = law(s);
    if (std::abs(fs - target) <= tol * (1.0 + target)) return sign * s;
    if (fs < flo || fs > fhi)
      throw std::runtime_error("invert_stress_law: non-monotone law");
    if (fs < target) {
      lo = s;
      flo = fs;
    } else {
      hi = s;
      fhi = fs;
    }
    double next = (fhi > flo) ? lo + (target - flo) * (hi - lo) / (fhi - flo)
                              : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    s = next;
  }
  return sign * s;
}

}  // namespace bilayer
