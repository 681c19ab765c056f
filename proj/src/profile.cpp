#include "stratwave/profile.hpp"

#include <boost/math/interpolators/cardinal_quintic_b_spline.hpp>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "stratwave/error.hpp"

namespace stratwave {

ScalarFunction::ScalarFunction(Fn value, Fn derivative)
    : value_(std::move(value)), derivative_(std::move(derivative)) {}

double ScalarFunction::derivative(double x) const {
  if (derivative_) return derivative_(x);
  const double h = 1e-3 * std::max(1.0, std::abs(x));
  return (8.0 * (value_(x + h) - value_(x - h)) - (value_(x + 2 * h) - value_(x - 2 * h))) /
         (12.0 * h);
}

ScalarFunction ScalarFunction::constant(double c) {
  ScalarFunction f([c](double) { return c; }, [](double) { return 0.0; });
  std::ostringstream os;
  os.precision(17);
  os << c;
  f.description_ = os.str();
  return f;
}

ScalarFunction ScalarFunction::from_expression(const Expression& e) {
  ScalarFunction f([e](double x) { return e(x); }, [e](double x) { return e.derivative(x); });
  f.description_ = e.text();
  return f;
}

ScalarFunction ScalarFunction::from_samples(const std::vector<double>& x,
                                            const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 6)
    throw InvalidInput("sampled profile needs at least 6 (x, y) pairs");
  const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  if (!(h > 0.0)) throw InvalidInput("sampled profile abscissae must increase");
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double expect = x.front() + h * static_cast<double>(i);
    if (std::abs(x[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect)))
      throw InvalidInput("sampled profile abscissae must be uniformly spaced");
  }
  auto spline = std::make_shared<boost::math::interpolators::cardinal_quintic_b_spline<double>>(
      y, x.front(), h);
  const double a = x.front(), b = x.back();
  auto clamp = [a, b](double t) { return std::min(std::max(t, a), b); };
  ScalarFunction f([spline, clamp](double t) { return (*spline)(clamp(t)); },
                   [spline, clamp](double t) { return spline->prime(clamp(t)); });
  f.description_ = "table[" + std::to_string(x.size()) + "]";
  return f;
}

ScalarFunction ScalarFunction::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open profile table '" + path + "'");
  std::vector<double> xs, ys;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ls(line);
    double a, b;
    if (!(ls >> a)) continue;
    if (!(ls >> b)) throw InvalidInput("profile table '" + path + "': expected two columns");
    xs.push_back(a);
    ys.push_back(b);
  }
  ScalarFunction f = from_samples(xs, ys);
  f.description_ = path;
  return f;
}

ScalarFunction ScalarFunction::rescaled(double xscale, double vscale) const {
  Fn v = value_;
  ScalarFunction self = *this;
  ScalarFunction f([v, xscale, vscale](double x) { return vscale * v(xscale * x); },
                   [self, xscale, vscale](double x) {
                     return vscale * xscale * self.derivative(xscale * x);
                   });
  f.description_ = description_;
  return f;
}

}  // namespace stratwave
