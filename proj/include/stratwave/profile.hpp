#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stratwave/expression.hpp"

namespace stratwave {

enum class Layer { lower, upper };

// A smooth scalar function with its first derivative. Derivatives come from
// the source when available (expressions, splines) and from a fourth-order
// central difference otherwise.
class ScalarFunction {
 public:
  using Fn = std::function<double(double)>;

  ScalarFunction() = default;
  ScalarFunction(Fn value, Fn derivative = {});

  static ScalarFunction constant(double c);
  static ScalarFunction from_expression(const Expression& e);
  // Uniformly spaced samples, quintic B-spline interpolation.
  static ScalarFunction from_samples(const std::vector<double>& x, const std::vector<double>& y);
  static ScalarFunction from_file(const std::string& path);

  double operator()(double x) const { return value_(x); }
  double derivative(double x) const;
  bool valid() const { return static_cast<bool>(value_); }

  // x -> vscale * f(xscale * x)
  ScalarFunction rescaled(double xscale, double vscale) const;

  const std::string& description() const { return description_; }
  void set_description(std::string d) { description_ = std::move(d); }

 private:
  Fn value_;
  Fn derivative_;
  std::string description_;
};

// Two smooth branches joined at a single breakpoint; "lower" lives below it.
struct PiecewiseProfile {
  double lo = 0.0;
  double breakpoint = 0.0;
  double hi = 0.0;
  ScalarFunction lower;
  ScalarFunction upper;

  const ScalarFunction& branch(Layer l) const { return l == Layer::lower ? lower : upper; }
  Layer layer_of(double x) const { return x < breakpoint ? Layer::lower : Layer::upper; }
  double operator()(double x) const { return branch(layer_of(x))(x); }
  double value(double x, Layer l) const { return branch(l)(x); }
  double derivative(double x, Layer l) const { return branch(l).derivative(x); }
  // upper minus lower at the breakpoint
  double jump() const { return upper(breakpoint) - lower(breakpoint); }
};

}  // namespace stratwave
