#include "stratwave/banded.hpp"

#include <algorithm>
#include <string>

#include "stratwave/error.hpp"

extern "C" {
void dgbtf2_(const int* m, const int* n, const int* kl, const int* ku, double* ab,
             const int* ldab, int* ipiv, int* info);
void dgbtrs_(const char* trans, const int* n, const int* kl, const int* ku, const int* nrhs,
             const double* ab, const int* ldab, const int* ipiv, double* b, const int* ldb,
             int* info);
}

namespace stratwave {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku),
      ab_(static_cast<std::size_t>(2 * kl + ku + 1) * static_cast<std::size_t>(n), 0.0) {}

void BandedMatrix::zero() { std::fill(ab_.begin(), ab_.end(), 0.0); }

void BandedMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    const int j0 = std::max(0, i - kl_), j1 = std::min(n_ - 1, i + ku_);
    for (int j = j0; j <= j1; ++j) s += at(i, j) * x[j];
    y[i] = s;
  }
}

void BandedMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
  for (int j = 0; j < n_; ++j) {
    double s = 0.0;
    const int i0 = std::max(0, j - ku_), i1 = std::min(n_ - 1, j + kl_);
    for (int i = i0; i <= i1; ++i) s += at(i, j) * x[i];
    y[j] = s;
  }
}

BandedLU::BandedLU(BandedMatrix a) : a_(std::move(a)), ipiv_(static_cast<std::size_t>(a_.n())) {
  const int n = a_.n(), kl = a_.kl(), ku = a_.ku(), ld = a_.ldab();
  int info = 0;
  // unblocked factorization: the blocked dgbtrf shipped with the system LAPACK returns
  // wrong factors once kl exceeds its block size (64)
  dgbtf2_(&n, &n, &kl, &ku, a_.data().data(), &ld, ipiv_.data(), &info);
  if (info > 0)
    throw NumericalError("banded LU: exactly singular pivot at row " + std::to_string(info));
  if (info < 0) throw NumericalError("banded LU: invalid argument " + std::to_string(-info));
}

void BandedLU::solve(std::span<double> rhs, bool transpose) const {
  const int n = a_.n(), kl = a_.kl(), ku = a_.ku(), ld = a_.ldab(), nrhs = 1;
  const char t = transpose ? 'T' : 'N';
  int info = 0;
  dgbtrs_(&t, &n, &kl, &ku, &nrhs, a_.data().data(), &ld, ipiv_.data(), rhs.data(), &n, &info);
  if (info != 0) throw NumericalError("banded solve failed");
}

}  // namespace stratwave
