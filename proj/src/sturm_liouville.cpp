#include "stratwave/sturm_liouville.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stratwave/error.hpp"
#include "stratwave/log.hpp"
#include "stratwave/ode.hpp"

namespace stratwave {

namespace {

using State2 = std::array<double, 2>;

struct LayerRun {
  std::vector<State2> lower, upper;
  ShootingState hat_minus, hat_plus;
};

LayerRun run_layers(const StratifiedBackground& bg, const TransversalIvp& ivp,
                    const std::vector<double>& t_lower, const std::vector<double>& t_upper,
                    const ShootOptions& opt) {
  OdeOptions o;
  o.atol = opt.tol;
  o.rtol = opt.tol;
  o.dt0 = 1e-3;
  auto make_rhs = [&](Layer l) {
    return [&bg, &ivp, l](double p, const State2& y, State2& dy) {
      const double hp = bg.H_p(p, l);
      dy[0] = hp * hp * hp * y[1];
      double g = ivp.mu * bg.rho_p(p, l) * y[0];
      if (ivp.nu != 0.0) g += ivp.nu * y[0] / hp;
      if (ivp.forcing) g += ivp.forcing(p, l);
      dy[1] = g;
    };
  };
  LayerRun r;
  r.lower = integrate_at<2>(make_rhs(Layer::lower), State2{ivp.start.phi, ivp.start.flux},
                            t_lower, o);
  const State2 below = r.lower.back();
  r.hat_minus = {below[0], below[1]};
  State2 above = below;
  above[1] += ivp.mu * bg.rho_jump() * below[0] - ivp.r3;
  r.hat_plus = {above[0], above[1]};
  r.upper = integrate_at<2>(make_rhs(Layer::upper), above, t_upper, o);
  for (const auto* run : {&r.lower, &r.upper})
    for (const State2& s : *run)
      if (s[0] == 0.0 && s[1] == 0.0 && !ivp.forcing && ivp.r3 == 0.0 &&
          (ivp.start.phi != 0.0 || ivp.start.flux != 0.0))
        throw NumericalError("shooting state collapsed to (0, 0)");
  return r;
}

ShootingState unit_start(const StratifiedBackground& bg) {
  const double hp = bg.H_p(-1.0, Layer::lower);
  return {0.0, 1.0 / (hp * hp * hp)};
}

double robin_defect(const StratifiedBackground& bg, double mu, const ShootingState& top) {
  return -top.flux + mu * bg.rho(0.0, Layer::upper) * top.phi;
}

// Number of sign changes of phi on (-1, 0].
int count_zeros(const StratifiedBackground& bg, double mu, double nu, const ShootOptions& opt) {
  const double k = std::sqrt(std::abs(nu)) * bg.H_p_max();
  const int n = 32 + static_cast<int>(std::ceil(3.0 * k));
  TransversalIvp ivp;
  ivp.mu = mu;
  ivp.nu = nu;
  ivp.start = unit_start(bg);
  const double ph = bg.p_hat();
  const int nl = std::max(8, static_cast<int>(n * (ph + 1.0)) + 1);
  const int nu_ = std::max(8, static_cast<int>(n * (-ph)) + 1);
  const LayerRun r = run_layers(bg, ivp, linspace(-1.0, ph, nl), linspace(ph, 0.0, nu_), opt);
  int zeros = 0;
  double last = 0.0;
  auto visit = [&](double v) {
    if (v == 0.0) return;
    if (last != 0.0 && (v > 0.0) != (last > 0.0)) ++zeros;
    last = v;
  };
  for (std::size_t i = 1; i < r.lower.size(); ++i) visit(r.lower[i][0]);
  for (std::size_t i = 1; i < r.upper.size(); ++i) visit(r.upper[i][0]);
  return zeros;
}

template <class Pred>
double bisect_threshold(Pred&& below_is_true, double lo, double hi) {
  // pred(lo) true, pred(hi) false; returns the switching point
  while (hi - lo > 1e-10 * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (below_is_true(mid)) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

template <class Fn>
double bisect_root(Fn&& f, double lo, double hi, double flo) {
  while (hi - lo > 1e-10 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)))) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

constexpr double kSpectrumFloor = -1e6;

}  // namespace

ShootingState integrate_transversal(const StratifiedBackground& bg, const TransversalIvp& ivp,
                                    const ShootOptions& opt) {
  const double ph = bg.p_hat();
  const LayerRun r = run_layers(bg, ivp, {-1.0, ph}, {ph, 0.0}, opt);
  return {r.upper.back()[0], r.upper.back()[1]};
}

TransversalSolution sample_transversal(const StratifiedBackground& bg, const TransversalIvp& ivp,
                                       const ShootOptions& opt) {
  const double ph = bg.p_hat();
  const int n = opt.table_intervals;
  const auto tl = linspace(-1.0, ph, n);
  const auto tu = linspace(ph, 0.0, n);
  const LayerRun r = run_layers(bg, ivp, tl, tu, opt);
  auto table = [&](Layer l, const std::vector<double>& t, const std::vector<State2>& s) {
    std::vector<double> f(t.size()), f1(t.size()), f2(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double p = t[k];
      const double hp = bg.H_p(p, l), hpp = bg.H_pp(p, l);
      f[k] = s[k][0];
      f1[k] = hp * hp * hp * s[k][1];
      double gp = ivp.mu * bg.rho_p(p, l) * f[k] + ivp.nu * f[k] / hp;
      if (ivp.forcing) gp += ivp.forcing(p, l);
      f2[k] = 3.0 * hpp * f1[k] / hp + hp * hp * hp * gp;
    }
    return HermiteTable(t, std::move(f), std::move(f1), std::move(f2));
  };
  TransversalSolution out;
  out.phi = LayeredFunction(ph, table(Layer::lower, tl, r.lower), table(Layer::upper, tu, r.upper));
  out.hat_minus = r.hat_minus;
  out.hat_plus = r.hat_plus;
  out.top = {r.upper.back()[0], r.upper.back()[1]};
  return out;
}

ShootingState shoot(const StratifiedBackground& bg, double mu, double nu, const ShootOptions& opt) {
  if (mu < 0.0) throw InvalidInput("shoot: mu must be non-negative");
  TransversalIvp ivp;
  ivp.mu = mu;
  ivp.nu = nu;
  ivp.start = unit_start(bg);
  return integrate_transversal(bg, ivp, opt);
}

double eval_A(const StratifiedBackground& bg, double mu, const ShootOptions& opt) {
  return robin_defect(bg, mu, shoot(bg, mu, 0.0, opt));
}

CriticalData find_mu_cr(const StratifiedBackground& bg, const CriticalOptions& opt) {
  auto A = [&](double mu) { return eval_A(bg, mu, opt.shoot); };
  double lo, hi;
  double Alo, Ahi;
  const double A1 = A(1.0);
  if (A1 < 0.0) {
    lo = 1.0;
    Alo = A1;
    hi = 2.0;
    Ahi = A(hi);
    while (Ahi < 0.0) {
      lo = hi;
      Alo = Ahi;
      hi *= 2.0;
      if (hi > opt.mu_cap)
        throw NumericalError("no sign change of A(mu) in (0, 1e6]: background outside supported regime");
      Ahi = A(hi);
    }
  } else {
    hi = 1.0;
    Ahi = A1;
    lo = 0.5;
    Alo = A(lo);
    while (Alo >= 0.0) {
      hi = lo;
      Ahi = Alo;
      lo *= 0.5;
      if (lo < 1e-12) throw NumericalError("A(mu) does not change sign near mu = 0");
      Alo = A(lo);
    }
  }
  (void)Ahi;
  double mu = bisect_root(A, lo, hi, Alo);
  // Newton polish
  double Am = A(mu), slope = 0.0;
  for (int it = 0; it < 10; ++it) {
    const double h = 1e-6 * mu;
    slope = (A(mu + h) - A(mu - h)) / (2.0 * h);
    if (std::abs(Am) < 1e-12 * (1.0 + std::abs(slope) * mu)) break;
    double next = mu - Am / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double An = A(next);
    if (An < 0.0) lo = next;
    else hi = next;
    mu = next;
    Am = An;
  }
  if (std::abs(Am) >= 1e-12 * (1.0 + std::abs(slope) * mu)) {
    std::ostringstream os;
    os << "A(mu_cr) = " << Am << " after polish";
    log::warn(os.str());
  }

  // A increasing through the root on a 5-point stencil
  {
    double prev = -INFINITY;
    for (int k = -2; k <= 2; ++k) {
      const double v = A(mu * (1.0 + 1e-4 * k));
      if (!(v > prev)) log::warn("A(mu) is not strictly increasing through mu_cr");
      prev = v;
    }
  }
  for (int k = 0; k < 8; ++k) {
    const double m = mu * k / 8.0;
    if (!(A(m) < 0.0)) log::warn("A(mu) is not negative below mu_cr at mu = " + std::to_string(m));
  }

  CriticalData cd;
  cd.mu_cr = mu;
  cd.F_cr = 1.0 / std::sqrt(mu);
  cd.A_slope = slope;
  TransversalIvp ivp;
  ivp.mu = mu;
  ivp.start = unit_start(bg);
  const TransversalSolution psi = sample_transversal(bg, ivp, opt.shoot);
  const double at_hat = psi.phi.value(bg.p_hat(), Layer::lower);
  if (!(at_hat > 0.0)) throw NumericalError("principal eigenfunction vanishes at the interface");
  cd.psi_rescale = 1.0 / at_hat;
  cd.phi0 = psi.phi.scaled(cd.psi_rescale);

  for (Layer l : {Layer::lower, Layer::upper}) {
    const HermiteTable& t = cd.phi0.table(l);
    for (int k = 0; k <= 256; ++k) {
      const double p = t.lo() + (t.hi() - t.lo()) * k / 256.0;
      if ((p > -1.0 && !(cd.phi0.value(p, l) > 0.0)) || !(cd.phi0.derivative(p, l) > 0.0))
        throw NumericalError("root of A(mu) is not the principal one (phi0 not positive/monotone)");
    }
  }
  return cd;
}

std::vector<double> dirichlet_spectrum(const StratifiedBackground& bg, double mu, int count,
                                       const ShootOptions& opt) {
  std::vector<double> out;
  if (count <= 0) return out;
  double floor = -1.0;
  while (count_zeros(bg, mu, floor, opt) < count) {
    floor *= 2.0;
    if (floor < kSpectrumFloor) break;
  }
  floor = std::max(floor, kSpectrumFloor);
  const int available = count_zeros(bg, mu, floor, opt);
  if (available < count)
    log::warn("Dirichlet spectrum truncated at nu > -1e6: found " + std::to_string(available));
  double hi = 0.0;
  if (count_zeros(bg, mu, hi, opt) > 0) {
    while (count_zeros(bg, mu, hi, opt) > 0) hi = 2.0 * hi + 1.0;
  }
  for (int j = 1; j <= std::min(count, available); ++j) {
    const double nu = bisect_threshold(
        [&](double v) { return count_zeros(bg, mu, v, opt) >= j; }, floor, hi);
    out.push_back(nu);
    hi = nu;
  }
  return out;
}

std::vector<double> transversal_spectrum(const StratifiedBackground& bg, double mu, int count,
                                         const ShootOptions& opt) {
  std::vector<double> out;
  if (count <= 0) return out;
  const std::vector<double> dir = dirichlet_spectrum(bg, mu, count, opt);
  auto D = [&](double nu) { return robin_defect(bg, mu, shoot(bg, mu, nu, opt)); };
  if (dir.empty()) return out;
  // top root above the first Dirichlet eigenvalue
  {
    const double a = dir[0];
    const double Da = D(a);
    double b = std::max(1.0, std::abs(a));
    double Db = D(b);
    while ((Db > 0.0) == (Da > 0.0)) {
      b *= 2.0;
      if (b > 1e12) throw NumericalError("cannot bracket the principal transversal eigenvalue");
      Db = D(b);
    }
    out.push_back(bisect_root(D, a, b, Da));
  }
  for (std::size_t j = 0; j + 1 < dir.size() && static_cast<int>(out.size()) < count; ++j) {
    const double a = dir[j + 1], b = dir[j];
    const double Da = D(a), Db = D(b);
    if ((Da > 0.0) == (Db > 0.0)) {
      log::warn("no sign change of the Robin defect between Dirichlet eigenvalues");
      continue;
    }
    out.push_back(bisect_root(D, a, b, Da));
  }
  if (static_cast<int>(out.size()) < count)
    log::warn("transversal spectrum truncated: " + std::to_string(out.size()) + " of " +
              std::to_string(count));
  return out;
}

std::vector<double> spectrum_at_criticality(const StratifiedBackground& bg,
                                            const CriticalData& critical, int count,
                                            const ShootOptions& opt) {
  return transversal_spectrum(bg, critical.mu_cr, count, opt);
}

double decay_rate(const StratifiedBackground& bg, double F, const ShootOptions& opt) {
  const std::vector<double> s = transversal_spectrum(bg, 1.0 / (F * F), 1, opt);
  if (s.empty() || !(s[0] < 0.0)) return 0.0;
  return std::sqrt(-s[0]);
}

}  // namespace stratwave
