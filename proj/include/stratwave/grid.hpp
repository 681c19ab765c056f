#pragma once

#include <cstddef>
#include <vector>

#include "stratwave/profile.hpp"

namespace stratwave {

// Truncated slitted strip. Rows 0..np_minus-1 cover [-1, p_hat], rows
// np_minus..rows-1 cover [p_hat, 0]; the interface row is stored twice.
// Symmetric grids cover q in [0, L] with an evenness wall at q = 0; full grids
// cover [-L, L] with w = 0 at both ends.
class SlitGrid {
 public:
  SlitGrid() = default;
  SlitGrid(double L, int nq, int np_minus, int np_plus, double p_hat, bool symmetric = true);

  double L() const { return L_; }
  int nq() const { return nq_; }
  int np_minus() const { return np_minus_; }
  int np_plus() const { return np_plus_; }
  int rows() const { return np_minus_ + np_plus_; }
  double p_hat() const { return p_hat_; }
  bool symmetric() const { return symmetric_; }

  double q0() const { return symmetric_ ? 0.0 : -L_; }
  double dq() const { return (L_ - q0()) / (nq_ - 1); }
  double dp(Layer l) const {
    return l == Layer::lower ? (p_hat_ + 1.0) / (np_minus_ - 1) : -p_hat_ / (np_plus_ - 1);
  }
  double q(int i) const { return i == nq_ - 1 ? L_ : q0() + i * dq(); }
  double p(int r) const;
  Layer layer(int r) const { return r < np_minus_ ? Layer::lower : Layer::upper; }
  int first_row(Layer l) const { return l == Layer::lower ? 0 : np_minus_; }
  int last_row(Layer l) const { return l == Layer::lower ? np_minus_ - 1 : rows() - 1; }
  int top_row() const { return rows() - 1; }
  int iface_lower() const { return np_minus_ - 1; }
  int iface_upper() const { return np_minus_; }

  std::size_t nodes() const { return static_cast<std::size_t>(nq_) * rows(); }
  std::size_t index(int i, int r) const { return static_cast<std::size_t>(i) * rows() + r; }

  bool dirichlet_column(int i) const { return i == nq_ - 1 || (!symmetric_ && i == 0); }
  int first_unknown_column() const { return symmetric_ ? 0 : 1; }
  int unknown_columns() const { return nq_ - 1 - (symmetric_ ? 0 : 1); }
  int unknowns_per_column() const { return rows() - 1; }
  std::size_t unknowns() const {
    return static_cast<std::size_t>(unknown_columns()) * unknowns_per_column();
  }
  // unknown index of node (i, r), or -1 for bottom/Dirichlet nodes
  long unknown(int i, int r) const {
    if (r == 0 || dirichlet_column(i)) return -1;
    return static_cast<long>(i - first_unknown_column()) * unknowns_per_column() + (r - 1);
  }

  bool same_shape(const SlitGrid& o) const;

 private:
  double L_ = 1.0;
  int nq_ = 0, np_minus_ = 0, np_plus_ = 0;
  double p_hat_ = -0.5;
  bool symmetric_ = true;
};

struct HeightField {
  SlitGrid grid;
  std::vector<double> w;  // w[grid.index(i, r)]
  double F = 0.0;
  double epsilon = 0.0;

  HeightField() = default;
  HeightField(SlitGrid g, double F_) : grid(g), w(g.nodes(), 0.0), F(F_) {}

  double& at(int i, int r) { return w[grid.index(i, r)]; }
  double at(int i, int r) const { return w[grid.index(i, r)]; }
  // value at column i with the evenness reflection for i < 0
  double sample(int i, int r) const;
  double max_abs() const;
};

// Reflect a half-grid field onto the full grid [-L, L].
HeightField mirror_to_full(const HeightField& half);

}  // namespace stratwave
