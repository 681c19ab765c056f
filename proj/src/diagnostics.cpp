#include "stratwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "stratwave/height_solver.hpp"

namespace stratwave {

namespace {

// Background quantities at the cell midpoints of every layer.
struct Cells {
  std::vector<double> hp, rho, pi;  // indexed by the lower row of the cell
};

Cells make_cells(const StratifiedBackground& bg, const SlitGrid& g) {
  Cells c;
  const int R = g.rows();
  c.hp.assign(R, 0.0);
  c.rho.assign(R, 0.0);
  c.pi.assign(R, 0.0);
  for (Layer l : {Layer::lower, Layer::upper}) {
    const double dp = g.dp(l);
    for (int r = g.first_row(l); r < g.last_row(l); ++r) {
      const double pm = g.p(r) + 0.5 * dp;
      c.hp[r] = bg.H_p(pm, l);
      c.rho[r] = bg.rho(pm, l);
      c.pi[r] = bg.pi(pm, l);
    }
  }
  return c;
}

// second-order w_q at node (i, r); one-sided at the ends of the strip
double w_q(const HeightField& f, int i, int r) {
  const SlitGrid& g = f.grid;
  const double dq = g.dq();
  const int last = g.nq() - 1;
  if (i == last) return (3.0 * f.at(i, r) - 4.0 * f.at(i - 1, r) + f.at(i - 2, r)) / (2.0 * dq);
  if (i == 0 && !g.symmetric())
    return (-3.0 * f.at(0, r) + 4.0 * f.at(1, r) - f.at(2, r)) / (2.0 * dq);
  return (f.at(i + 1, r) - f.sample(i - 1, r)) / (2.0 * dq);
}

double column_force(const HeightField* f, const SlitGrid& g, const Cells& c, int i, double F) {
  const double iF2 = 1.0 / (F * F);
  double S = 0.0;
  for (Layer l : {Layer::lower, Layer::upper}) {
    const double dp = g.dp(l);
    for (int r = g.first_row(l); r < g.last_row(l); ++r) {
      double hp = c.hp[r], wm = 0.0, hq = 0.0;
      if (f) {
        hp += (f->at(i, r + 1) - f->at(i, r)) / dp;
        wm = 0.5 * (f->at(i, r + 1) + f->at(i, r));
        hq = 0.5 * (w_q(*f, i, r) + w_q(*f, i, r + 1));
      }
      const double Hp = c.hp[r];
      // P + rho (u - c)^2 in streamline variables; the h_q^2 term vanishes only where h_q = 0
      const double integrand = 0.5 * (1.0 - hq * hq) / (hp * hp) + 0.5 / (Hp * Hp) -
                               iF2 * c.rho[r] * wm + iF2 * c.pi[r];
      S += integrand * hp * dp;
    }
  }
  return S;
}

int crest_column(const SlitGrid& g) { return g.symmetric() ? 0 : (g.nq() - 1) / 2; }

}  // namespace

double flow_force(const HeightField& f, const StratifiedBackground& bg, int column) {
  const Cells c = make_cells(bg, f.grid);
  return column_force(&f, f.grid, c, column, f.F);
}

double flow_force_laminar(const StratifiedBackground& bg, const SlitGrid& grid, double F) {
  const Cells c = make_cells(bg, grid);
  return column_force(nullptr, grid, c, 0, F);
}

FlowForceReport flow_force_profile(const HeightField& f, const StratifiedBackground& bg) {
  const SlitGrid& g = f.grid;
  const Cells c = make_cells(bg, g);
  FlowForceReport rep;
  rep.S.resize(g.nq());
  for (int i = 0; i < g.nq(); ++i) rep.S[i] = column_force(&f, g, c, i, f.F);
  double sum = 0.0;
  for (double s : rep.S) sum += s;
  rep.mean = sum / g.nq();
  for (double s : rep.S) rep.drift = std::max(rep.drift, std::abs(s - rep.mean));
  rep.laminar = column_force(nullptr, g, c, 0, f.F);
  return rep;
}

IdentityReport check_flow_force_identity(const HeightField& f, const StratifiedBackground& bg) {
  const SlitGrid& g = f.grid;
  const int ic = crest_column(g);
  IdentityReport rep;
  double lhs = 0.0, rhs = 0.0;
  for (Layer l : {Layer::lower, Layer::upper}) {
    const double dp = g.dp(l);
    for (int r = g.first_row(l); r < g.last_row(l); ++r) {
      const double w0 = f.at(ic, r), w1 = f.at(ic, r + 1);
      const double a0 = std::abs(bg.rho_p(g.p(r), l)) * w0 * w0;
      const double a1 = std::abs(bg.rho_p(g.p(r + 1), l)) * w1 * w1;
      lhs += 0.5 * (a0 + a1) * dp;
      const double pm = g.p(r) + 0.5 * dp;
      const double Hp = bg.H_p(pm, l);
      const double wp = (w1 - w0) / dp;
      rhs += wp * wp / (Hp * Hp * (Hp + wp)) * dp;
    }
  }
  const double wt = f.at(ic, g.top_row()), wh = f.at(ic, g.iface_lower());
  lhs += bg.rho(0.0, Layer::upper) * wt * wt - bg.rho_jump() * wh * wh;
  lhs /= f.F * f.F;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.residual = std::abs(lhs - rhs);
  return rep;
}

FroudeBoundReport check_froude_upper_bound(const HeightField& f, const StratifiedBackground& bg) {
  const SlitGrid& g = f.grid;
  const NodalDerivatives d = nodal_derivatives(f, bg);
  const int ic = crest_column(g);
  FroudeBoundReport rep;
  rep.rho_max = bg.rho_max();
  rep.Hp_max = bg.H_p_max();
  for (int r = 0; r < g.rows(); ++r)
    rep.crest_hp_max = std::max(rep.crest_hp_max, std::abs(d.hp[g.index(ic, r)]));
  rep.bound = 2.0 * rep.rho_max * rep.Hp_max * rep.Hp_max * rep.crest_hp_max;
  rep.F2 = f.F * f.F;
  rep.slack = rep.bound - rep.F2;
  return rep;
}

NodalReport check_nodal(const HeightField& f, double band_factor) {
  const SlitGrid& g = f.grid;
  NodalReport rep;
  const double winf = f.max_abs();
  if (winf < 1e-14) {
    rep.trivial = true;
    rep.elevation_ok = false;
    return rep;
  }
  const double dq = g.dq();
  const double h = std::max({dq / g.L(), g.dp(Layer::lower), g.dp(Layer::upper)});
  rep.band = band_factor * h * h * winf;
  const double band = rep.band;

  // records the violation if value >= band (sign should be negative)
  auto neg = [&](bool& ok, NodalViolation& worst, int i, int r, double value) {
    if (value >= band) {
      if (ok || value > worst.value) worst = {i, r, value};
      ok = false;
    }
  };
  const int last = g.nq() - 1;  // Dirichlet column
  for (int i = 0; i < last; ++i)
    for (int r = 1; r < g.rows(); ++r) neg(rep.elevation_ok, rep.elevation, i, r, -f.at(i, r));

  for (int i = 1; i < last; ++i)
    for (int r = 1; r < g.rows(); ++r)
      neg(rep.wq_ok, rep.wq, i, r, (f.at(i + 1, r) - f.at(i - 1, r)) / (2.0 * dq));

  auto wqq0 = [&](int r) { return 2.0 * (f.sample(1, r) - f.at(0, r)) / (dq * dq); };
  const int ic = crest_column(g);
  auto wqq_c = [&](int r) {
    if (g.symmetric()) return wqq0(r);
    return (f.at(ic + 1, r) - 2.0 * f.at(ic, r) + f.at(ic - 1, r)) / (dq * dq);
  };
  for (int r = 1; r < g.rows(); ++r) neg(rep.wqq_ok, rep.wqq, ic, r, wqq_c(r));

  const double dpm = g.dp(Layer::lower);
  for (int i = 1; i < last; ++i) {
    if (!g.symmetric() && i <= ic) continue;
    auto wq = [&](int r) { return (f.at(i + 1, r) - f.at(i - 1, r)) / (2.0 * dq); };
    const double v = (-3.0 * wq(0) + 4.0 * wq(1) - wq(2)) / (2.0 * dpm);
    neg(rep.wqp_ok, rep.wqp, i, 0, v);
  }

  rep.wqqp_value = (-3.0 * wqq_c(0) + 4.0 * wqq_c(1) - wqq_c(2)) / (2.0 * dpm);
  neg(rep.wqqp_ok, rep.wqqp, ic, 0, rep.wqqp_value);

  if (g.symmetric()) {
    // one-sided slope at the wall against the size of its own truncation error
    double d3 = 0.0;
    for (int i = 0; i + 3 < g.nq(); ++i)
      for (int r = 0; r < g.rows(); ++r)
        d3 = std::max(d3, std::abs(f.at(i + 3, r) - 3.0 * f.at(i + 2, r) +
                                   3.0 * f.at(i + 1, r) - f.at(i, r)));
    const double tol = band_factor * d3 / dq + band;
    for (int r = 0; r < g.rows(); ++r) {
      const double s = (-3.0 * f.at(0, r) + 4.0 * f.at(1, r) - f.at(2, r)) / (2.0 * dq);
      if (std::abs(s) > tol) {
        if (rep.symmetry_ok || std::abs(s) > std::abs(rep.symmetry.value)) rep.symmetry = {0, r, s};
        rep.symmetry_ok = false;
      }
    }
  } else {
    for (int k = 1; ic - k >= 0 && ic + k < g.nq(); ++k)
      for (int r = 0; r < g.rows(); ++r) {
        const double s = f.at(ic + k, r) - f.at(ic - k, r);
        if (std::abs(s) > band) {
          if (rep.symmetry_ok || std::abs(s) > std::abs(rep.symmetry.value))
            rep.symmetry = {ic + k, r, s};
          rep.symmetry_ok = false;
        }
      }
  }
  return rep;
}

VelocityReport stagnation_and_velocity(const HeightField& f, const StratifiedBackground& bg) {
  const SlitGrid& g = f.grid;
  const NodalDerivatives d = nodal_derivatives(f, bg);
  VelocityReport rep;
  rep.stagnation_metric = std::numeric_limits<double>::infinity();
  for (int r = 0; r < g.rows(); ++r) {
    const double rho = bg.rho(g.p(r), g.layer(r));
    for (int i = 0; i < g.nq(); ++i) {
      const double hp = d.hp[g.index(i, r)], hq = d.hq[g.index(i, r)];
      const double s = std::sqrt(rho) * hp;
      if (s > rep.sup_sqrt_rho_hp) {
        rep.sup_sqrt_rho_hp = s;
        rep.stagnation_metric = 1.0 / s;
        rep.stag_i = i;
        rep.stag_r = r;
      }
      rep.velocity_sup = std::max(rep.velocity_sup, (1.0 + hq * hq) / (rho * hp * hp));
    }
  }
  return rep;
}

TrivialityReport check_critical_triviality(const StratifiedBackground& bg,
                                           const ReducedModel& model, const SlitGrid& grid,
                                           double F, double eps_seed) {
  TrivialityReport rep;
  rep.F = F;
  HeightField seed = elevation_ansatz(model, eps_seed, grid);
  seed.F = F;
  rep.seed_inf = seed.max_abs();
  NewtonReport nr;
  try {
    const HeightField sol = newton_solve(seed, bg, {}, &nr);
    rep.converged = true;
    rep.w_inf = sol.max_abs();
  } catch (const NewtonFailure& e) {
    rep.message = e.what();
    rep.w_inf = e.best().max_abs();
  } catch (const std::exception& e) {
    rep.message = e.what();
    rep.w_inf = std::numeric_limits<double>::quiet_NaN();
  }
  rep.iterations = nr.iterations;
  return rep;
}

double blowup_functional(const HeightField& f, const StratifiedBackground& bg, double F_cr) {
  const SlitGrid& g = f.grid;
  const NodalDerivatives d = nodal_derivatives(f, bg);
  double wp = 0.0, wq = 0.0, minhp = std::numeric_limits<double>::infinity();
  for (int r = 0; r < g.rows(); ++r) {
    const double Hp = bg.H_p(g.p(r), g.layer(r));
    for (int i = 0; i < g.nq(); ++i) {
      const std::size_t k = g.index(i, r);
      wp = std::max(wp, std::abs(d.hp[k] - Hp));
      wq = std::max(wq, std::abs(d.hq[k]));
      minhp = std::min(minhp, d.hp[k]);
    }
  }
  return f.max_abs() + wp + wq + 1.0 / minhp + f.F + 1.0 / (f.F - F_cr);
}

WaveDiagnostics diagnose(const HeightField& f, const StratifiedBackground& bg, double F_cr) {
  WaveDiagnostics d;
  d.F = f.F;
  d.epsilon = f.epsilon;
  d.amplitude = crest_amplitude(f);
  const HpExtremes e = hp_extremes(f, bg);
  d.min_hp = e.min;
  d.max_hp = e.max;
  d.flow_force = flow_force_profile(f, bg);
  d.identity = check_flow_force_identity(f, bg);
  d.froude = check_froude_upper_bound(f, bg);
  d.nodal = check_nodal(f);
  d.velocity = stagnation_and_velocity(f, bg);
  if (F_cr > 0.0) d.blowup = blowup_functional(f, bg, F_cr);
  return d;
}

std::string format_report(const WaveDiagnostics& d) {
  std::ostringstream os;
  os << std::setprecision(10);
  auto yn = [](bool b) { return b ? "ok" : "VIOLATED"; };
  auto where = [](const NodalViolation& v) {
    std::ostringstream s;
    if (v.i >= 0) s << " at (i=" << v.i << ", r=" << v.r << ", value=" << v.value << ")";
    return s.str();
  };
  os << "F = " << d.F << ", crest amplitude w(0, p_hat) = " << d.amplitude << "\n";
  os << "h_p range [" << d.min_hp << ", " << d.max_hp << "]\n";
  os << "flow force: mean " << d.flow_force.mean << ", drift " << d.flow_force.drift
     << ", laminar " << d.flow_force.laminar << "\n";
  os << "crest identity: lhs " << d.identity.lhs << ", rhs " << d.identity.rhs << "\n";
  os << "Froude bound: " << d.froude.bound << " vs F^2 = " << d.froude.F2 << " ("
     << yn(d.froude.ok()) << ")\n";
  if (d.nodal.trivial) {
    os << "nodal: trivial field\n";
  } else {
    os << "nodal (band " << d.nodal.band << "):\n";
    os << "  w > 0    " << yn(d.nodal.elevation_ok) << where(d.nodal.elevation) << "\n";
    os << "  w_q < 0  " << yn(d.nodal.wq_ok) << where(d.nodal.wq) << "\n";
    os << "  w_qq < 0 " << yn(d.nodal.wqq_ok) << where(d.nodal.wqq) << "\n";
    os << "  w_qp < 0 " << yn(d.nodal.wqp_ok) << where(d.nodal.wqp) << "\n";
    os << "  w_qqp<0  " << yn(d.nodal.wqqp_ok) << where(d.nodal.wqqp) << "\n";
    os << "  even     " << yn(d.nodal.symmetry_ok) << where(d.nodal.symmetry) << "\n";
  }
  os << "inf(c - u) = " << d.velocity.stagnation_metric << ", sup |u - c, v|^2 = "
     << d.velocity.velocity_sup << "\n";
  os << "\n[diagnostics]\n";
  os << std::setprecision(17);
  os << "F = " << d.F << "\n";
  os << "epsilon = " << d.epsilon << "\n";
  os << "amplitude = " << d.amplitude << "\n";
  os << "min_hp = " << d.min_hp << "\n";
  os << "max_hp = " << d.max_hp << "\n";
  os << "flow_force_mean = " << d.flow_force.mean << "\n";
  os << "flow_force_drift = " << d.flow_force.drift << "\n";
  os << "identity_residual = " << d.identity.residual << "\n";
  os << "froude_bound_slack = " << d.froude.slack << "\n";
  os << "elevation_ok = " << d.nodal.elevation_ok << "\n";
  os << "symmetry_ok = " << d.nodal.symmetry_ok << "\n";
  os << "nodal_ok = " << (d.nodal.wq_ok && d.nodal.wqq_ok && d.nodal.wqp_ok && d.nodal.wqqp_ok)
     << "\n";
  os << "nodal_band = " << d.nodal.band << "\n";
  os << "stagnation_metric = " << d.velocity.stagnation_metric << "\n";
  os << "velocity_sup = " << d.velocity.velocity_sup << "\n";
  os << "blowup_N = " << d.blowup << "\n";
  return os.str();
}

}  // namespace stratwave
