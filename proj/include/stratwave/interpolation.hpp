#pragma once

#include <memory>
#include <vector>

#include "stratwave/profile.hpp"

namespace stratwave {

// Quintic Hermite interpolant from nodal values, first and second derivatives.
class HermiteTable {
 public:
  HermiteTable() = default;
  HermiteTable(std::vector<double> x, std::vector<double> f, std::vector<double> f1,
               std::vector<double> f2);

  double value(double x) const;
  double derivative(double x) const;
  double second(double x) const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool empty() const { return !impl_; }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  double lo_ = 0.0, hi_ = 0.0;
  double clamp(double x) const;
};

// A function of the streamline coordinate p on [-1, p_hat] and [p_hat, 0].
class LayeredFunction {
 public:
  LayeredFunction() = default;
  LayeredFunction(double p_hat, HermiteTable lower, HermiteTable upper)
      : p_hat_(p_hat), lower_(std::move(lower)), upper_(std::move(upper)) {}

  double p_hat() const { return p_hat_; }
  const HermiteTable& table(Layer l) const { return l == Layer::lower ? lower_ : upper_; }

  double value(double p, Layer l) const { return scale_ * table(l).value(p); }
  double derivative(double p, Layer l) const { return scale_ * table(l).derivative(p); }
  double second(double p, Layer l) const { return scale_ * table(l).second(p); }

  Layer layer_of(double p) const { return p < p_hat_ ? Layer::lower : Layer::upper; }
  double operator()(double p) const { return value(p, layer_of(p)); }

  LayeredFunction scaled(double s) const {
    LayeredFunction out = *this;
    out.scale_ *= s;
    return out;
  }
  bool empty() const { return lower_.empty(); }

 private:
  double p_hat_ = 0.0;
  HermiteTable lower_, upper_;
  double scale_ = 1.0;
};

}  // namespace stratwave
