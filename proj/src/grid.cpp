#include "stratwave/grid.hpp"

#include <algorithm>
#include <cmath>

#include "stratwave/error.hpp"

namespace stratwave {

SlitGrid::SlitGrid(double L, int nq, int np_minus, int np_plus, double p_hat, bool symmetric)
    : L_(L), nq_(nq), np_minus_(np_minus), np_plus_(np_plus), p_hat_(p_hat),
      symmetric_(symmetric) {
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidInput("grid: L must be positive");
  if (nq < 8 || np_minus < 8 || np_plus < 8)
    throw InvalidInput("grid: nq, np_minus and np_plus must all be >= 8");
  if (!(p_hat > -1.0 && p_hat < 0.0)) throw InvalidInput("grid: p_hat must lie in (-1, 0)");
}

double SlitGrid::p(int r) const {
  if (r < np_minus_) {
    if (r == np_minus_ - 1) return p_hat_;
    return -1.0 + r * dp(Layer::lower);
  }
  const int j = r - np_minus_;
  if (j == np_plus_ - 1) return 0.0;
  return p_hat_ + j * dp(Layer::upper);
}

bool SlitGrid::same_shape(const SlitGrid& o) const {
  return L_ == o.L_ && nq_ == o.nq_ && np_minus_ == o.np_minus_ && np_plus_ == o.np_plus_ &&
         p_hat_ == o.p_hat_ && symmetric_ == o.symmetric_;
}

double HeightField::sample(int i, int r) const {
  if (i < 0) {
    if (grid.symmetric()) return at(-i, r);
    return 0.0;
  }
  if (i >= grid.nq()) return 0.0;
  return at(i, r);
}

double HeightField::max_abs() const {
  double m = 0.0;
  for (double v : w) m = std::max(m, std::abs(v));
  return m;
}

HeightField mirror_to_full(const HeightField& half) {
  const SlitGrid& g = half.grid;
  if (!g.symmetric()) throw InvalidInput("mirror_to_full expects a half-grid field");
  SlitGrid full(g.L(), 2 * g.nq() - 1, g.np_minus(), g.np_plus(), g.p_hat(), false);
  HeightField out(full, half.F);
  out.epsilon = half.epsilon;
  const int c = g.nq() - 1;
  for (int i = 0; i < full.nq(); ++i)
    for (int r = 0; r < full.rows(); ++r) out.at(i, r) = half.at(std::abs(i - c), r);
  return out;
}

}  // namespace stratwave
