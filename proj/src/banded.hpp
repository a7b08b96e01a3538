#pragma once

#include <vector>

namespace bilayer {

/// Square banded matrix in LAPACK general-band storage (column-major, with
/// kl spare rows on top for the pivoted LU). Entry (i, j) lives at
/// ab[j*ldab + kl + ku + i - j] for -ku <= i - j <= kl.
class BandedMatrix {
 public:
  BandedMatrix(int n, int kl, int ku);

  void clear();
  double& at(int i, int j);
  void add(int i, int j, double value) { at(i, j) += value; }

  /// Solves this * x = rhs in place (rhs becomes x) via dgbsv. The band
  /// storage is overwritten by the factorization, so assemble before every
  /// solve. Throws std::runtime_error on a singular pivot.
  void solve(std::vector<double>& rhs);

  int size() const { return n_; }

 private:
  int n_, kl_, ku_, ldab_;
  std::vector<double> ab_;
};

}  // namespace bilayer
