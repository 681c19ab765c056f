#include "stratwave/interpolation.hpp"

#include <algorithm>
#include <boost/math/interpolators/quintic_hermite.hpp>

#include "stratwave/error.hpp"

namespace stratwave {

struct HermiteTable::Impl {
  boost::math::interpolators::quintic_hermite<std::vector<double>> spline;
  explicit Impl(std::vector<double>&& x, std::vector<double>&& f, std::vector<double>&& f1,
                std::vector<double>&& f2)
      : spline(std::move(x), std::move(f), std::move(f1), std::move(f2)) {}
};

HermiteTable::HermiteTable(std::vector<double> x, std::vector<double> f, std::vector<double> f1,
                           std::vector<double> f2) {
  if (x.size() < 2 || f.size() != x.size() || f1.size() != x.size() || f2.size() != x.size())
    throw InvalidInput("HermiteTable: inconsistent table sizes");
  lo_ = x.front();
  hi_ = x.back();
  impl_ = std::make_shared<const Impl>(std::move(x), std::move(f), std::move(f1), std::move(f2));
}

double HermiteTable::clamp(double x) const { return std::min(std::max(x, lo_), hi_); }

double HermiteTable::value(double x) const { return impl_->spline(clamp(x)); }
double HermiteTable::derivative(double x) const { return impl_->spline.prime(clamp(x)); }
double HermiteTable::second(double x) const { return impl_->spline.double_prime(clamp(x)); }

}  // namespace stratwave
