#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stratwave {

// Square band matrix in LAPACK general-band storage with room for the LU fill.
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(int n, int kl, int ku);

  int n() const { return n_; }
  int kl() const { return kl_; }
  int ku() const { return ku_; }
  int ldab() const { return 2 * kl_ + ku_ + 1; }

  bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }
  double& at(int i, int j) { return ab_[idx(i, j)]; }
  double at(int i, int j) const { return ab_[idx(i, j)]; }
  double get(int i, int j) const { return in_band(i, j) ? at(i, j) : 0.0; }
  void add(int i, int j, double v) { ab_[idx(i, j)] += v; }
  void zero();

  void multiply(std::span<const double> x, std::span<double> y) const;
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;

  std::vector<double>& data() { return ab_; }
  const std::vector<double>& data() const { return ab_; }

 private:
  int n_ = 0, kl_ = 0, ku_ = 0;
  std::vector<double> ab_;
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(kl_ + ku_ + i - j) +
           static_cast<std::size_t>(j) * static_cast<std::size_t>(ldab());
  }
};

// LU factorization with partial pivoting (LAPACK dgbtf2/dgbtrs).
class BandedLU {
 public:
  explicit BandedLU(BandedMatrix a);
  void solve(std::span<double> rhs, bool transpose = false) const;
  int n() const { return a_.n(); }

 private:
  BandedMatrix a_;
  std::vector<int> ipiv_;
};

}  // namespace stratwave
