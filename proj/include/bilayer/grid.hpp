#pragma once

#include <vector>

namespace bilayer {

/// Uniform node-centered mesh on [0, L], endpoints included, dx = L/(n-1).
struct Grid {
  double length;
  int n;
  double dx;

  double x(int i) const { return dx * i; }
};

/// Throws std::invalid_argument unless length > 0 and n >= 8.
Grid make_grid(double length, int n);

/// Film heights at one time instant. Positivity is monitored by the stepper,
/// not enforced here.
struct State {
  double t = 0.0;
  std::vector<double> f;
  std::vector<double> g;
};

/// Copies v into an array with two ghost nodes per side, filled by even
/// reflection about each endpoint node (v[-1] = v[1], v[-2] = v[2] and the
/// mirror image on the right). Reflection makes all odd derivatives vanish
/// at the boundary nodes. Requires v.size() >= 4.
std::vector<double> ghost_extend(const std::vector<double>& v);

/// Second-order central differences with ghost extension.
std::vector<double> d1(const std::vector<double>& v, const Grid& grid);
std::vector<double> d2(const std::vector<double>& v, const Grid& grid);
std::vector<double> d3(const std::vector<double>& v, const Grid& grid);

/// Third derivative at the n-1 faces i+1/2, as the difference quotient of
/// nodal second derivatives: (d2[i+1] - d2[i])/dx.
std::vector<double> d3_faces(const std::vector<double>& v, const Grid& grid);

/// Fourth derivative as d2 applied twice (with re-extension). The composition
/// is exactly zero on constant arrays in floating point, which keeps flat
/// states exact fixed points downstream.
std::vector<double> d4(const std::vector<double>& v, const Grid& grid);

/// Conservative divergence: rate_i = -(J_{i+1/2} - J_{i-1/2})/w_i with zero
/// boundary-face fluxes, where w_i is the node's cell width (dx interior,
/// dx/2 at the two walls). The trapezoid-weighted sum of any field updated by
/// these rates is conserved exactly (telescoping), and the half-cell boundary
/// weights keep the update second-order consistent at the walls. Takes the
/// n-1 interior face fluxes.
std::vector<double> divergence_of_flux(const std::vector<double>& face_flux,
                                       const Grid& grid);

}  // namespace bilayer
