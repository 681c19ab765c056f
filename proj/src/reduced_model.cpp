#include "stratwave/reduced_model.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <functional>
#include <sstream>

#include "stratwave/error.hpp"
#include "stratwave/grid.hpp"
#include "stratwave/log.hpp"

namespace stratwave {

namespace {

// Composite Gauss-Legendre per layer, doubling panels until the relative change is < 1e-12.
double integrate_layers(const std::function<double(double, Layer)>& f, double p_hat) {
  double total = 0.0;
  for (Layer l : {Layer::lower, Layer::upper}) {
    const double a = l == Layer::lower ? -1.0 : p_hat;
    const double b = l == Layer::lower ? p_hat : 0.0;
    auto composite = [&](int panels) {
      double s = 0.0;
      const double h = (b - a) / panels;
      for (int k = 0; k < panels; ++k) {
        const double x0 = a + k * h;
        s += boost::math::quadrature::gauss<double, 10>::integrate(
            [&](double p) { return f(p, l); }, x0, x0 + h);
      }
      return s;
    };
    int panels = 4;
    double prev = composite(panels);
    for (;;) {
      panels *= 2;
      const double cur = composite(panels);
      const bool done = std::abs(cur - prev) <= 1e-12 * std::max(std::abs(cur), 1e-300) ||
                        std::abs(cur - prev) < 1e-300 || panels >= 4096;
      prev = cur;
      if (done) break;
    }
    total += prev;
  }
  return total;
}

void require_normalized(const StratifiedBackground& bg, const CriticalData& cd) {
  const double v = cd.phi0.value(bg.p_hat(), Layer::lower);
  if (std::abs(v - 1.0) > 1e-12)
    throw InvalidInput("phi0 must be normalized to phi0(p_hat) = +1 before computing B1/B2");
}

double phi_p(const CriticalData& cd, double p, Layer l) { return cd.phi0.derivative(p, l); }

}  // namespace

double normalization_integral(const StratifiedBackground& bg, const CriticalData& cd) {
  return integrate_layers(
      [&](double p, Layer l) {
        const double v = cd.phi0.value(p, l);
        return v * v / bg.H_p(p, l);
      },
      bg.p_hat());
}

double compute_B1(const StratifiedBackground& bg, const CriticalData& cd) {
  require_normalized(bg, cd);
  const double ph = bg.p_hat();
  const double interior = integrate_layers(
      [&](double p, Layer l) {
        const double v = cd.phi0.value(p, l);
        return -bg.rho_p(p, l) * v * v;
      },
      ph);
  const double top = cd.phi0.value(0.0, Layer::upper);
  const double r2 = bg.rho(0.0, Layer::upper) * top;
  const double hat = cd.phi0.value(ph, Layer::lower);
  const double r3 = bg.rho_jump() * hat;
  return (interior + r2 * top - r3 * hat) / normalization_integral(bg, cd);
}

double compute_B2(const StratifiedBackground& bg, const CriticalData& cd) {
  require_normalized(bg, cd);
  const double num = integrate_layers(
      [&](double p, Layer l) {
        const double d = phi_p(cd, p, l), hp = bg.H_p(p, l);
        return d * d * d / (hp * hp * hp * hp);
      },
      bg.p_hat());
  return -1.5 * num / normalization_integral(bg, cd);
}

CorrectionProfile solve_correction(const StratifiedBackground& bg, const CriticalData& cd,
                                   Correction which, const ShootOptions& opt) {
  require_normalized(bg, cd);
  const double mu = cd.mu_cr;
  const double ph = bg.p_hat();
  const LayeredFunction& phi = cd.phi0;

  std::function<double(double, Layer)> r1;
  double r2 = 0.0, r3 = 0.0;
  if (which == Correction::K1) {
    r1 = [&](double p, Layer l) { return -bg.rho_p(p, l) * phi.value(p, l); };
    r2 = bg.rho(0.0, Layer::upper) * phi.value(0.0, Layer::upper);
    r3 = bg.rho_jump() * phi.value(ph, Layer::lower);
  } else {
    r1 = [&](double p, Layer l) {
      const double d = phi.derivative(p, l), dd = phi.second(p, l);
      const double hp = bg.H_p(p, l), hpp = bg.H_pp(p, l);
      const double h4 = hp * hp * hp * hp;
      return 1.5 * (2.0 * d * dd / h4 - 4.0 * d * d * hpp / (h4 * hp));
    };
    auto q = [&](double p, Layer l) {
      const double d = phi.derivative(p, l), hp = bg.H_p(p, l);
      return d * d / (hp * hp * hp * hp);
    };
    r2 = -1.5 * q(0.0, Layer::upper);
    r3 = -1.5 * (q(ph, Layer::upper) - q(ph, Layer::lower));
  }

  TransversalIvp hom;
  hom.mu = mu;
  hom.start = {0.0, 1.0};
  TransversalIvp part;
  part.mu = mu;
  part.forcing = r1;
  part.r3 = r3;
  TransversalIvp kern;
  kern.mu = mu;
  kern.forcing = [&](double p, Layer l) { return phi.value(p, l) / bg.H_p(p, l); };

  const TransversalSolution sh = sample_transversal(bg, hom, opt);
  const TransversalSolution sp = sample_transversal(bg, part, opt);
  const TransversalSolution sk = sample_transversal(bg, kern, opt);

  const double rho0 = bg.rho(0.0, Layer::upper);
  auto S = [&](const ShootingState& t) { return -t.flux + mu * rho0 * t.phi; };
  // [S(h)   -S(k)] [a]   [r2 - S(p)]
  // [h(ph)  -k(ph)] [B] = [-p(ph)   ]
  const double a11 = S(sh.top), a12 = -S(sk.top);
  const double a21 = sh.hat_minus.phi, a22 = -sk.hat_minus.phi;
  const double b1 = r2 - S(sp.top), b2 = -sp.hat_minus.phi;
  const double det = a11 * a22 - a12 * a21;
  const double scale = std::abs(a11 * a22) + std::abs(a12 * a21);
  if (!(std::abs(det) > 1e-10 * scale))
    throw NumericalError("bordered correction system is singular (degenerate spectrum)");
  const double a = (b1 * a22 - a12 * b2) / det;
  const double B = (a11 * b2 - a21 * b1) / det;

  CorrectionProfile out;
  out.multiplier = B;
  auto combine = [&](Layer l) {
    const HermiteTable& th = sh.phi.table(l);
    const int n = opt.table_intervals;
    std::vector<double> x(n + 1), f(n + 1), f1(n + 1), f2(n + 1);
    for (int k = 0; k <= n; ++k) {
      const double p = th.lo() + (th.hi() - th.lo()) * k / n;
      const double pp = k == n ? th.hi() : p;
      x[k] = pp;
      f[k] = a * sh.phi.value(pp, l) + sp.phi.value(pp, l) - B * sk.phi.value(pp, l);
      f1[k] = a * sh.phi.derivative(pp, l) + sp.phi.derivative(pp, l) -
              B * sk.phi.derivative(pp, l);
      f2[k] = a * sh.phi.second(pp, l) + sp.phi.second(pp, l) - B * sk.phi.second(pp, l);
    }
    return HermiteTable(std::move(x), std::move(f), std::move(f1), std::move(f2));
  };
  out.K = LayeredFunction(ph, combine(Layer::lower), combine(Layer::upper));
  return out;
}

ReducedModel build_reduced_model(const StratifiedBackground& bg, const CriticalData& cd,
                                 const ShootOptions& opt) {
  ReducedModel m;
  m.critical = cd;
  m.denom = normalization_integral(bg, cd);
  m.B1 = compute_B1(bg, cd);
  m.B2 = compute_B2(bg, cd);
  m.B2_psi = m.B2 / cd.psi_rescale;
  if (!(m.B1 > 0.0)) throw NumericalError("B1 is not positive");
  const CorrectionProfile k1 = solve_correction(bg, cd, Correction::K1, opt);
  const CorrectionProfile k2 = solve_correction(bg, cd, Correction::K2, opt);
  m.K1 = k1.K;
  m.K2 = k2.K;
  m.B1_multiplier = k1.multiplier;
  m.B2_multiplier = k2.multiplier;
  auto rel = [](double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); };
  if (rel(m.B1_multiplier, m.B1) > 1e-8 || rel(m.B2_multiplier, m.B2) > 1e-8) {
    std::ostringstream os;
    os.precision(15);
    os << "solvability multipliers disagree with quadrature: B1 " << m.B1 << " vs "
       << m.B1_multiplier << ", B2 " << m.B2 << " vs " << m.B2_multiplier;
    log::warn(os.str());
  }
  return m;
}

InterfaceSeed sech_seed(const ReducedModel& model, double epsilon, double q, SeedSign sign) {
  if (!(model.B1 > 0.0)) throw InvalidInput("sech_seed: B1 must be positive");
  if (!(epsilon > 0.0)) throw InvalidInput("sech_seed: epsilon must be positive");
  if (epsilon > 0.5) log::warn("sech_seed: epsilon > 0.5 is outside the weakly nonlinear regime");
  const double e2 = epsilon * epsilon;
  double amp = 3.0 * model.B1 * e2 / (2.0 * model.B2);
  if (sign == SeedSign::elevation) amp = -amp;
  const double k = 0.5 * epsilon * std::sqrt(model.B1);
  const double x = k * std::abs(q);
  const double ch = std::cosh(x);
  const double s = 1.0 / (ch * ch);
  const double th = std::tanh(x);
  InterfaceSeed out;
  out.v = amp * s;
  out.dv = (q < 0.0 ? 1.0 : -1.0) * 2.0 * amp * k * s * th;
  out.d2v = amp * k * k * (4.0 * s - 6.0 * s * s);
  return out;
}

double froude_from_epsilon(double mu_cr, double epsilon) {
  const double mu = mu_cr - epsilon * epsilon;
  if (!(mu > 0.0)) throw InvalidInput("epsilon^2 must be smaller than mu_cr");
  return 1.0 / std::sqrt(mu);
}

double epsilon_from_froude(double mu_cr, double F) {
  const double e2 = mu_cr - 1.0 / (F * F);
  return e2 > 0.0 ? std::sqrt(e2) : 0.0;
}

HeightField elevation_ansatz(const ReducedModel& model, double epsilon, const SlitGrid& grid,
                             SeedSign sign) {
  const double ph = model.critical.phi0.p_hat();
  if (std::abs(grid.p_hat() - ph) > 1e-12)
    throw InvalidInput("elevation_ansatz: grid interface row does not sit at p_hat");
  HeightField f(grid, froude_from_epsilon(model.critical.mu_cr, epsilon));
  f.epsilon = epsilon;
  const double e2 = epsilon * epsilon;
  for (int i = 0; i < grid.nq(); ++i) {
    if (grid.dirichlet_column(i)) continue;
    const double v = sech_seed(model, epsilon, grid.q(i), sign).v;
    for (int r = 1; r < grid.rows(); ++r) {
      const Layer l = grid.layer(r);
      const double p = grid.p(r);
      f.at(i, r) = v * model.critical.phi0.value(p, l) + v * v * model.K2.value(p, l) +
                   e2 * v * model.K1.value(p, l);
    }
  }
  return f;
}

}  // namespace stratwave
