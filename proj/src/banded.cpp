#include "banded.hpp"

#include <lapacke.h>

#include <algorithm>
#include <stdexcept>

namespace bilayer {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
      ab_(static_cast<std::size_t>(ldab_) * n, 0.0) {}

void BandedMatrix::clear() { std::fill(ab_.begin(), ab_.end(), 0.0); }

double& BandedMatrix::at(int i, int j) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i - j > kl_ || j - i > ku_)
    throw std::out_of_range("BandedMatrix::at outside band");
  return ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)];
}

void BandedMatrix::solve(std::vector<double>& rhs) {
  if (static_cast<int>(rhs.size()) != n_)
    throw std::invalid_argument("BandedMatrix::solve size mismatch");
  std::vector<lapack_int> ipiv(n_);
  const lapack_int info =
      LAPACKE_dgbsv(LAPACK_COL_MAJOR, n_, kl_, ku_, 1, ab_.data(), ldab_,
                    ipiv.data(), rhs.data(), n_);
  if (info != 0)
    throw std::runtime_error("BandedMatrix::solve: singular factorization");
}

}  // namespace bilayer
