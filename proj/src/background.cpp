#include "stratwave/background.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "stratwave/error.hpp"
#include "stratwave/log.hpp"
#include "stratwave/ode.hpp"

namespace stratwave {

namespace {

template <class F>
double integrate(F&& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-14);
}

void check_branch(const ScalarFunction& f, double a, double b, bool is_density,
                  const char* what, int samples) {
  double prev = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double y = a + (b - a) * k / (samples - 1);
    const double v = f(y);
    if (!std::isfinite(v)) throw InvalidInput(std::string(what) + " is not finite");
    if (v <= 0.0)
      throw InvalidInput(std::string(what) + " must be strictly positive (value " +
                         std::to_string(v) + " at y = " + std::to_string(y) + ")");
    if (is_density && k > 0 && v > prev * (1.0 + 1e-12))
      throw InvalidInput("density must be non-increasing in y (unstable at y = " +
                         std::to_string(y) + ")");
    prev = v;
  }
}

}  // namespace

void FluidParameters::validate() const {
  auto pos = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidInput(std::string("fluid.") + name + " must be a positive number");
  };
  pos(c, "c");
  pos(g, "g");
  pos(d_plus, "d_plus");
  pos(d_minus, "d_minus");
}

ScaledProfiles nondimensionalize(const FluidParameters& params, const PiecewiseProfile& density,
                                 const PiecewiseProfile& ustar, const NondimOptions& opt) {
  params.validate();
  const double d = params.d();
  const double yb = -params.d_plus;
  if (!density.lower.valid() || !density.upper.valid() || !ustar.lower.valid() ||
      !ustar.upper.valid())
    throw InvalidInput("density and shear profiles need both branches");

  const int n = std::max(opt.validation_samples, 3);
  check_branch(density.lower, -d, yb, true, "density (lower)", n);
  check_branch(density.upper, yb, 0.0, true, "density (upper)", n);
  check_branch(ustar.lower, -d, yb, false, "shear u* (lower)", n);
  check_branch(ustar.upper, yb, 0.0, false, "shear u* (upper)", n);
  if (density.upper(yb) > density.lower(yb) * (1.0 + 1e-14))
    throw InvalidInput("density jump at the interface must be stable (upper <= lower)");

  ScaleReport rep;
  rep.d = d;
  rep.g = params.g;
  rep.c = params.c;
  rep.rho0 = density.upper(0.0);
  rep.sqrt_gd = std::sqrt(params.g * d);

  const double flux =
      integrate([&](double y) { return std::sqrt(density.lower(y)) * ustar.lower(y); }, -d, yb) +
      integrate([&](double y) { return std::sqrt(density.upper(y)) * ustar.upper(y); }, yb, 0.0);
  if (!(flux > 0.0)) throw InvalidInput("normalization integral of sqrt(rho) u* is zero");
  rep.flux_integral = flux;
  rep.m_over_F = std::sqrt(params.g * rep.rho0 * d * d * d);
  double factor = rep.m_over_F / flux;
  if (std::abs(factor - 1.0) > 1e-12) {
    if (!opt.auto_rescale)
      throw InvalidInput("shear profile violates the flux normalization (factor " +
                         std::to_string(factor) + ")");
    std::ostringstream os;
    os << std::setprecision(12) << "rescaling u* by " << factor
       << " to satisfy int sqrt(rho) u* dy = sqrt(g rho0 d^3)";
    log::info(os.str());
  } else {
    factor = 1.0;
  }
  rep.ustar_factor = factor;
  const double scaled_flux = factor * flux;
  rep.F_relation_constant = params.g * rep.rho0 * d * d * d / (scaled_flux * scaled_flux);

  ScaledProfiles out;
  out.params.c = params.c / rep.sqrt_gd;
  out.params.g = 1.0;
  out.params.d_plus = params.d_plus / d;
  out.params.d_minus = params.d_minus / d;
  const double yh = -out.params.d_plus;
  out.density.lo = -1.0;
  out.density.breakpoint = yh;
  out.density.hi = 0.0;
  out.density.lower = density.lower.rescaled(d, 1.0 / rep.rho0);
  out.density.upper = density.upper.rescaled(d, 1.0 / rep.rho0);
  out.ustar.lo = -1.0;
  out.ustar.breakpoint = yh;
  out.ustar.hi = 0.0;
  out.ustar.lower = ustar.lower.rescaled(d, factor / rep.sqrt_gd);
  out.ustar.upper = ustar.upper.rescaled(d, factor / rep.sqrt_gd);
  out.scale = rep;
  return out;
}

double interface_streamline(const ScaledProfiles& s) {
  const double yh = s.density.breakpoint;
  return -integrate(
      [&](double y) { return std::sqrt(s.density.upper(y)) * s.ustar.upper(y); }, yh, 0.0);
}

namespace {

struct Slope {
  const ScaledProfiles* s;
  Layer layer;

  double clamp(double y) const {
    const double yh = s->density.breakpoint;
    return layer == Layer::lower ? std::clamp(y, -1.0, yh) : std::clamp(y, yh, 0.0);
  }
  // G(y) = 1 / (sqrt(rho) u*)
  double G(double y) const {
    y = clamp(y);
    return 1.0 / (std::sqrt(s->density.value(y, layer)) * s->ustar.value(y, layer));
  }
  double dG(double y) const {
    y = clamp(y);
    const double r = s->density.value(y, layer), rp = s->density.derivative(y, layer);
    const double u = s->ustar.value(y, layer), up = s->ustar.derivative(y, layer);
    const double sr = std::sqrt(r);
    const double g = 1.0 / (sr * u);
    return -g * g * (rp * u / (2.0 * sr) + sr * up);
  }
};

HermiteTable height_layer(const ScaledProfiles& s, Layer layer, double p0, double p1, double H0,
                          const HeightOptions& opt) {
  const Slope sl{&s, layer};
  const auto t = linspace(p0, p1, opt.intervals);
  OdeOptions o;
  o.atol = opt.tol;
  o.rtol = opt.tol;
  o.dt0 = (p1 - p0) / opt.intervals;
  auto states = integrate_at<1>(
      [&](double, const std::array<double, 1>& y, std::array<double, 1>& dy) {
        dy[0] = sl.G(y[0] - 1.0);
      },
      std::array<double, 1>{H0}, t, o);
  std::vector<double> f(t.size()), f1(t.size()), f2(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    f[k] = states[k][0];
    f1[k] = sl.G(f[k] - 1.0);
    f2[k] = sl.dG(f[k] - 1.0) * f1[k];
    if (!(f1[k] > 0.0) || !std::isfinite(f1[k]))
      throw InvalidInput("asymptotic height is not strictly monotone (stagnant background)");
  }
  return HermiteTable(t, std::move(f), std::move(f1), std::move(f2));
}

}  // namespace

LayeredFunction solve_asymptotic_height(const ScaledProfiles& s, double p_hat,
                                        const HeightOptions& opt) {
  if (!(p_hat > -1.0 && p_hat < 0.0)) throw InvalidInput("interface streamline outside (-1, 0)");
  HermiteTable lower = height_layer(s, Layer::lower, -1.0, p_hat, 0.0, opt);
  const double Hhat = lower.value(p_hat);
  HermiteTable upper = height_layer(s, Layer::upper, p_hat, 0.0, Hhat, opt);
  const double Htop = upper.value(0.0);
  const double expect = 1.0 + s.density.breakpoint;
  if (std::abs(Hhat - expect) > opt.anchor_tol || std::abs(Htop - 1.0) > opt.anchor_tol) {
    std::ostringstream os;
    os << std::setprecision(12) << "asymptotic height misses its anchors: H(p_hat) = " << Hhat
       << " (expected " << expect << "), H(0) = " << Htop
       << "; profiles do not satisfy the flux normalization";
    throw InvalidInput(os.str());
  }
  return LayeredFunction(p_hat, std::move(lower), std::move(upper));
}

struct StratifiedBackground::Impl {
  ScaledProfiles s;
  double p_hat = 0.0;
  LayeredFunction H;
  double rho_max = 0.0;
  double H_p_max = 0.0;

  Slope slope(Layer l) const { return Slope{&s, l}; }
};

StratifiedBackground::StratifiedBackground(ScaledProfiles s, const HeightOptions& opt) {
  auto impl = std::make_shared<Impl>();
  impl->s = std::move(s);
  impl->p_hat = interface_streamline(impl->s);
  impl->H = solve_asymptotic_height(impl->s, impl->p_hat, opt);
  impl_ = impl;
  double rmax = 0.0, hmax = 0.0;
  for (Layer l : {Layer::lower, Layer::upper}) {
    const double a = l == Layer::lower ? -1.0 : p_hat();
    const double b = l == Layer::lower ? p_hat() : 0.0;
    for (int k = 0; k <= 512; ++k) {
      const double p = a + (b - a) * k / 512.0;
      rmax = std::max(rmax, rho(p, l));
      hmax = std::max(hmax, H_p(p, l));
    }
  }
  impl->rho_max = rmax;
  impl->H_p_max = hmax;
}

double StratifiedBackground::p_hat() const { return impl_->p_hat; }
const ScaledProfiles& StratifiedBackground::scaled() const { return impl_->s; }
const ScaleReport& StratifiedBackground::scale() const { return impl_->s.scale; }
const LayeredFunction& StratifiedBackground::H_table() const { return impl_->H; }

double StratifiedBackground::H(double p, Layer l) const { return impl_->H.value(p, l); }

double StratifiedBackground::H_p(double p, Layer l) const {
  return impl_->slope(l).G(H(p, l) - 1.0);
}

double StratifiedBackground::H_pp(double p, Layer l) const {
  const Slope sl = impl_->slope(l);
  const double y = H(p, l) - 1.0;
  return sl.dG(y) * sl.G(y);
}

double StratifiedBackground::rho(double p, Layer l) const {
  const Slope sl = impl_->slope(l);
  return impl_->s.density.value(sl.clamp(H(p, l) - 1.0), l);
}

double StratifiedBackground::rho_p(double p, Layer l) const {
  const Slope sl = impl_->slope(l);
  const double y = sl.clamp(H(p, l) - 1.0);
  return impl_->s.density.derivative(y, l) * sl.G(y);
}

double StratifiedBackground::rho_jump() const {
  return rho(p_hat(), Layer::upper) - rho(p_hat(), Layer::lower);
}

double StratifiedBackground::ustar(double p, Layer l) const {
  const Slope sl = impl_->slope(l);
  return impl_->s.ustar.value(sl.clamp(H(p, l) - 1.0), l);
}

double StratifiedBackground::ustar_p(double p, Layer l) const {
  const Slope sl = impl_->slope(l);
  const double y = sl.clamp(H(p, l) - 1.0);
  return impl_->s.ustar.derivative(y, l) * sl.G(y);
}

// dE/dp along the far field: (y/F^2 + (U-c)^2/2) rho_p + rho (U-c) U_p, with U - c = -u*.
double StratifiedBackground::beta_a(double p, Layer l) const {
  const double u = ustar(p, l);
  return 0.5 * u * u * rho_p(p, l) + rho(p, l) * u * ustar_p(p, l);
}

double StratifiedBackground::beta_b(double p, Layer l) const {
  return (H(p, l) - 1.0) * rho_p(p, l);
}

double StratifiedBackground::pi(double p, Layer l) const {
  const auto& dens = impl_->s.density;
  const double yh = dens.breakpoint;
  const double y = impl_->slope(l).clamp(H(p, l) - 1.0);
  if (l == Layer::upper) return integrate([&](double t) { return dens.upper(t); }, y, 0.0);
  return integrate([&](double t) { return dens.lower(t); }, y, yh) +
         integrate([&](double t) { return dens.upper(t); }, yh, 0.0);
}

double StratifiedBackground::bernoulli_energy(double p, Layer l, double F) const {
  const double u = ustar(p, l);
  const double inv = 1.0 / (F * F);
  return 0.5 * rho(p, l) * u * u + inv * pi(p, l) + inv * rho(p, l) * (H(p, l) - 1.0);
}

double StratifiedBackground::rho_max() const { return impl_->rho_max; }
double StratifiedBackground::H_p_max() const { return impl_->H_p_max; }
double StratifiedBackground::F_relation_constant() const {
  return impl_->s.scale.F_relation_constant;
}

BetaProfiles compute_beta(const StratifiedBackground& bg) {
  for (Layer l : {Layer::lower, Layer::upper}) {
    const double a = l == Layer::lower ? -1.0 : bg.p_hat();
    const double b = l == Layer::lower ? bg.p_hat() : 0.0;
    for (int k = 1; k < 64; ++k) {
      const double p = a + (b - a) * k / 64.0;
      if (!std::isfinite(bg.rho_p(p, l)) || !std::isfinite(bg.ustar_p(p, l)))
        throw InvalidInput("non-finite derivative of the density or shear profile");
    }
  }
  BetaProfiles out;
  for (PiecewiseProfile* prof : {&out.a, &out.b}) {
    prof->lo = -1.0;
    prof->breakpoint = bg.p_hat();
    prof->hi = 0.0;
  }
  out.a.lower = ScalarFunction([bg](double p) { return bg.beta_a(p, Layer::lower); });
  out.a.upper = ScalarFunction([bg](double p) { return bg.beta_a(p, Layer::upper); });
  out.b.lower = ScalarFunction([bg](double p) { return bg.beta_b(p, Layer::lower); });
  out.b.upper = ScalarFunction([bg](double p) { return bg.beta_b(p, Layer::upper); });
  return out;
}

StratifiedBackground make_background(const FluidParameters& params,
                                     const PiecewiseProfile& density,
                                     const PiecewiseProfile& ustar, const HeightOptions& opt) {
  StratifiedBackground bg(nondimensionalize(params, density, ustar), opt);
  compute_beta(bg);
  return bg;
}

std::string background_report(const StratifiedBackground& bg, int rows_per_layer) {
  std::ostringstream os;
  os << "# p H H_p rho beta_a beta_b\n" << std::setprecision(15);
  for (Layer l : {Layer::lower, Layer::upper}) {
    const double a = l == Layer::lower ? -1.0 : bg.p_hat();
    const double b = l == Layer::lower ? bg.p_hat() : 0.0;
    for (int k = 0; k < rows_per_layer; ++k) {
      const double p = a + (b - a) * k / (rows_per_layer - 1);
      os << p << ' ' << bg.H(p, l) << ' ' << bg.H_p(p, l) << ' ' << bg.rho(p, l) << ' '
         << bg.beta_a(p, l) << ' ' << bg.beta_b(p, l) << '\n';
    }
  }
  return os.str();
}

}  // namespace stratwave
