#include "stratwave/height_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "stratwave/log.hpp"

namespace stratwave {

namespace {

// Flux values with partial derivatives in (Wq, Wp).
struct Flux {
  double val, dq, dp;
};

// a = -(1 + Wq^2) / (2 (Hp + Wp)^2) + 1 / (2 Hp^2), written without cancellation
inline Flux flux_a(double wq, double wp, double hp) {
  const double s = hp + wp, s2 = s * s;
  const double val = (wp * (2.0 * hp + wp) - hp * hp * wq * wq) / (2.0 * hp * hp * s2);
  return {val, -wq / s2, (1.0 + wq * wq) / (s2 * s)};
}

// b = Wq / (Hp + Wp)
inline Flux flux_b(double wq, double wp, double hp) {
  const double s = hp + wp;
  return {wq / s, 1.0 / s, -wq / (s * s)};
}

struct Term {
  int i, r;
  double c;
};

// Linear stencil of at most 4 nodes.
struct Stencil {
  std::array<Term, 4> t;
  int n = 0;
  void add(int i, int r, double c) { t[n++] = {i, r, c}; }
};

// Row of Jacobian entries gathered before insertion.
struct RowAcc {
  std::array<Term, 40> t;
  int n = 0;
  void add(const Stencil& s, double scale) {
    for (int k = 0; k < s.n; ++k) t[n++] = {s.t[k].i, s.t[k].r, s.t[k].c * scale};
  }
  void add(int i, int r, double c) { t[n++] = {i, r, c}; }
};

}  // namespace

HeightProblem::HeightProblem(const StratifiedBackground& bg, const SlitGrid& grid)
    : bg_(bg), grid_(grid) {
  if (std::abs(grid.p_hat() - bg.p_hat()) > 1e-12)
    throw InvalidInput("grid interface row does not match the background p_hat");
  const int R = grid.rows();
  hp_node_.resize(R);
  hp_half_.resize(R, 0.0);
  rhop_node_.resize(R);
  for (int r = 0; r < R; ++r) {
    const Layer l = grid.layer(r);
    const double p = grid.p(r);
    hp_node_[r] = bg.H_p(p, l);
    rhop_node_[r] = bg.rho_p(p, l);
    if (r != grid.last_row(l)) hp_half_[r] = bg.H_p(p + 0.5 * grid.dp(l), l);
  }
  hp_top_ = bg.H_p(0.0, Layer::upper);
  rho_top_ = bg.rho(0.0, Layer::upper);
  hp_hat_minus_ = bg.H_p(grid.p_hat(), Layer::lower);
  hp_hat_plus_ = bg.H_p(grid.p_hat(), Layer::upper);
  rho_jump_ = bg.rho_jump();
}

BandedMatrix HeightProblem::make_matrix() const {
  return BandedMatrix(static_cast<int>(size()), bandwidth(), bandwidth());
}

void HeightProblem::gather(const HeightField& f, std::span<double> x) const {
  const SlitGrid& g = grid_;
  for (int i = 0; i < g.nq(); ++i)
    for (int r = 1; r < g.rows(); ++r) {
      const long u = g.unknown(i, r);
      if (u >= 0) x[u] = f.at(i, r);
    }
}

void HeightProblem::scatter(std::span<const double> x, HeightField& f) const {
  const SlitGrid& g = grid_;
  for (int i = 0; i < g.nq(); ++i)
    for (int r = 0; r < g.rows(); ++r) {
      const long u = g.unknown(i, r);
      f.at(i, r) = u >= 0 ? x[u] : 0.0;
    }
}

template <bool Jac>
void HeightProblem::column(int i, const HeightField& f, double mu, double* res, BandedMatrix* J,
                           ResidualInfo& info) const {
  const SlitGrid& g = grid_;
  const double dq = g.dq();
  auto w = [&](int ii, int r) { return f.sample(ii, r); };
  auto eval = [&](const Stencil& s) {
    double v = 0.0;
    for (int k = 0; k < s.n; ++k) v += s.t[k].c * w(s.t[k].i, s.t[k].r);
    return v;
  };
  auto track = [&](double hp, int r) {
    if (hp < info.min_hp) {
      info.min_hp = hp;
      info.worst_i = i;
      info.worst_r = r;
    }
  };
  auto emit = [&](int r, double value, RowAcc& acc) {
    const long row = g.unknown(i, r);
    res[row] = value;
    if constexpr (Jac) {
      for (int k = 0; k < acc.n; ++k) {
        int ii = acc.t[k].i;
        if (ii < 0) {
          if (!g.symmetric()) continue;
          ii = -ii;
        }
        if (ii >= g.nq()) continue;
        const long col = g.unknown(ii, acc.t[k].r);
        if (col < 0) continue;
        J->add(static_cast<int>(row), static_cast<int>(col), acc.t[k].c);
      }
    }
  };

  for (Layer l : {Layer::lower, Layer::upper}) {
    const double dp = g.dp(l);
    const int r0 = g.first_row(l), r1 = g.last_row(l);
    for (int r = r0 + 1; r < r1; ++r) {
      RowAcc acc;
      double value = 0.0;
      // vertical fluxes at r + 1/2 and r - 1/2
      for (int side = 0; side < 2; ++side) {
        const int ra = side == 0 ? r : r - 1;  // lower node of the half cell
        Stencil sp, sq;
        sp.add(i, ra + 1, 1.0 / dp);
        sp.add(i, ra, -1.0 / dp);
        const double c = 1.0 / (4.0 * dq);
        sq.add(i + 1, ra, c);
        sq.add(i - 1, ra, -c);
        sq.add(i + 1, ra + 1, c);
        sq.add(i - 1, ra + 1, -c);
        const double hp = hp_half_[ra];
        const double wp = eval(sp), wq = eval(sq);
        track(hp + wp, r);
        const Flux a = flux_a(wq, wp, hp);
        const double sgn = (side == 0 ? 1.0 : -1.0) / dp;
        value += sgn * a.val;
        if constexpr (Jac) {
          acc.add(sp, sgn * a.dp);
          acc.add(sq, sgn * a.dq);
        }
      }
      // horizontal fluxes at i + 1/2 and i - 1/2
      for (int side = 0; side < 2; ++side) {
        const int ia = side == 0 ? i : i - 1;
        Stencil sp, sq;
        sq.add(ia + 1, r, 1.0 / dq);
        sq.add(ia, r, -1.0 / dq);
        const double c = 1.0 / (4.0 * dp);
        sp.add(ia, r + 1, c);
        sp.add(ia, r - 1, -c);
        sp.add(ia + 1, r + 1, c);
        sp.add(ia + 1, r - 1, -c);
        const double hp = hp_node_[r];
        const double wp = eval(sp), wq = eval(sq);
        track(hp + wp, r);
        const Flux b = flux_b(wq, wp, hp);
        const double sgn = (side == 0 ? 1.0 : -1.0) / dq;
        value += sgn * b.val;
        if constexpr (Jac) {
          acc.add(sp, sgn * b.dp);
          acc.add(sq, sgn * b.dq);
        }
      }
      value -= mu * rhop_node_[r] * w(i, r);
      if constexpr (Jac) acc.add(i, r, -mu * rhop_node_[r]);
      emit(r, value, acc);
    }
  }

  // top row: (1 + h_q^2)/(2 h_p^2) - 1/(2 H_p^2) + mu rho w = 0
  {
    const int r = g.top_row();
    const double dp = g.dp(Layer::upper);
    Stencil sp, sq;
    sp.add(i, r, 1.5 / dp);
    sp.add(i, r - 1, -2.0 / dp);
    sp.add(i, r - 2, 0.5 / dp);
    sq.add(i + 1, r, 0.5 / dq);
    sq.add(i - 1, r, -0.5 / dq);
    const double wp = eval(sp), wq = eval(sq);
    track(hp_top_ + wp, r);
    const Flux a = flux_a(wq, wp, hp_top_);
    RowAcc acc;
    const double value = -a.val + mu * rho_top_ * w(i, r);
    if constexpr (Jac) {
      acc.add(sp, -a.dp);
      acc.add(sq, -a.dq);
      acc.add(i, r, mu * rho_top_);
    }
    emit(r, value, acc);
  }

  // interface: transmission on the lower copy, continuity on the upper copy
  {
    const int rm = g.iface_lower(), rp = g.iface_upper();
    const double dpm = g.dp(Layer::lower), dpp = g.dp(Layer::upper);
    Stencil spp, sqp, spm, sqm;
    spp.add(i, rp, -1.5 / dpp);
    spp.add(i, rp + 1, 2.0 / dpp);
    spp.add(i, rp + 2, -0.5 / dpp);
    sqp.add(i + 1, rp, 0.5 / dq);
    sqp.add(i - 1, rp, -0.5 / dq);
    spm.add(i, rm, 1.5 / dpm);
    spm.add(i, rm - 1, -2.0 / dpm);
    spm.add(i, rm - 2, 0.5 / dpm);
    sqm.add(i + 1, rm, 0.5 / dq);
    sqm.add(i - 1, rm, -0.5 / dq);
    const double wpp = eval(spp), wqp = eval(sqp), wpm = eval(spm), wqm = eval(sqm);
    track(hp_hat_plus_ + wpp, rp);
    track(hp_hat_minus_ + wpm, rm);
    const Flux ap = flux_a(wqp, wpp, hp_hat_plus_);
    const Flux am = flux_a(wqm, wpm, hp_hat_minus_);
    RowAcc acc;
    const double value = -ap.val + am.val + mu * rho_jump_ * w(i, rm);
    if constexpr (Jac) {
      acc.add(spp, -ap.dp);
      acc.add(sqp, -ap.dq);
      acc.add(spm, am.dp);
      acc.add(sqm, am.dq);
      acc.add(i, rm, mu * rho_jump_);
    }
    emit(rm, value, acc);

    RowAcc cont;
    if constexpr (Jac) {
      cont.add(i, rp, 1.0);
      cont.add(i, rm, -1.0);
    }
    emit(rp, w(i, rp) - w(i, rm), cont);
  }
}

ResidualInfo HeightProblem::residual(const HeightField& f, std::span<double> out,
                                     Exec exec) const {
  if (!f.grid.same_shape(grid_)) throw InvalidInput("field grid does not match the problem");
  if (out.size() != size()) throw InvalidInput("residual buffer has the wrong size");
  const double mu = 1.0 / (f.F * f.F);
  const int c0 = grid_.first_unknown_column(), nc = grid_.unknown_columns();
  std::vector<ResidualInfo> infos(static_cast<std::size_t>(nc));
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < nc; ++k) column<false>(c0 + k, f, mu, out.data(), nullptr, infos[k]);
  } else {
    for (int k = 0; k < nc; ++k) column<false>(c0 + k, f, mu, out.data(), nullptr, infos[k]);
  }
  ResidualInfo info;
  for (const ResidualInfo& c : infos)
    if (c.min_hp < info.min_hp) info = c;
  return info;
}

void HeightProblem::jacobian(const HeightField& f, BandedMatrix& J, Exec exec) const {
  if (!f.grid.same_shape(grid_)) throw InvalidInput("field grid does not match the problem");
  J.zero();
  const double mu = 1.0 / (f.F * f.F);
  const int c0 = grid_.first_unknown_column(), nc = grid_.unknown_columns();
  std::vector<double> scratch(size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < nc; ++k) {
      ResidualInfo info;
      column<true>(c0 + k, f, mu, scratch.data(), &J, info);
    }
  } else {
    for (int k = 0; k < nc; ++k) {
      ResidualInfo info;
      column<true>(c0 + k, f, mu, scratch.data(), &J, info);
    }
  }
}

void HeightProblem::residual_dF(const HeightField& f, std::span<double> out) const {
  const SlitGrid& g = grid_;
  const double dmu = -2.0 / (f.F * f.F * f.F);
  std::fill(out.begin(), out.end(), 0.0);
  for (int i = 0; i < g.nq(); ++i) {
    if (g.dirichlet_column(i)) continue;
    for (int r = 1; r < g.rows(); ++r) {
      const long u = g.unknown(i, r);
      double v = 0.0;
      if (r == g.top_row()) v = rho_top_ * f.at(i, r);
      else if (r == g.iface_lower()) v = rho_jump_ * f.at(i, r);
      else if (r == g.iface_upper()) v = 0.0;
      else v = -rhop_node_[r] * f.at(i, r);
      out[u] = dmu * v;
    }
  }
}

std::vector<double> assemble_residual(const HeightField& f, const StratifiedBackground& bg,
                                      ResidualInfo* info, Exec exec) {
  HeightProblem prob(bg, f.grid);
  std::vector<double> r(prob.size());
  const ResidualInfo i = prob.residual(f, r, exec);
  if (info) *info = i;
  if (!i.elliptic()) log::warn("assemble_residual: ellipticity lost (H_p + w_p <= 0)");
  return r;
}

BandedMatrix assemble_jacobian(const HeightField& f, const StratifiedBackground& bg, Exec exec) {
  HeightProblem prob(bg, f.grid);
  BandedMatrix J = prob.make_matrix();
  prob.jacobian(f, J, exec);
  return J;
}

namespace {

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double norm_2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

HeightField newton_solve(const HeightProblem& prob, const HeightField& seed,
                         const NewtonOptions& opt, NewtonReport* report_out,
                         std::span<const double> rhs) {
  const std::size_t n = prob.size();
  NewtonReport rep;
  HeightField x = seed;
  std::vector<double> xu(n), r(n), rt(n), dx(n);
  prob.gather(x, xu);
  prob.scatter(xu, x);

  auto eval = [&](const HeightField& f, std::vector<double>& out) {
    const ResidualInfo info = prob.residual(f, out, opt.exec);
    if (!rhs.empty())
      for (std::size_t k = 0; k < n; ++k) out[k] -= rhs[k];
    return info;
  };

  ResidualInfo info = eval(x, r);
  if (!info.elliptic()) throw InvalidInput("newton_solve: seed is not elliptic (H_p + w_p <= 0)");
  double rn = norm_inf(r);
  rep.residual_history.push_back(rn);
  HeightField best = x;
  double best_norm = rn;
  BandedMatrix J = prob.make_matrix();
  std::vector<double> ratios;

  for (int it = 0; it < opt.max_iter && rn >= opt.tol; ++it) {
    prob.jacobian(x, J, opt.exec);
    BandedLU lu(J);
    for (std::size_t k = 0; k < n; ++k) dx[k] = -r[k];
    lu.solve(dx);

    const double r2 = norm_2(r);
    double lambda = 1.0;
    bool accepted = false, saw_elliptic = false;
    HeightField trial = x;
    std::vector<double> tu(n);
    for (int h = 0; h <= opt.max_halvings; ++h) {
      for (std::size_t k = 0; k < n; ++k) tu[k] = xu[k] + lambda * dx[k];
      prob.scatter(tu, trial);
      const ResidualInfo ti = eval(trial, rt);
      if (ti.elliptic()) {
        saw_elliptic = true;
        if (norm_2(rt) <= (1.0 - opt.armijo * lambda) * r2) {
          accepted = true;
          info = ti;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      rep.iterations = it + 1;
      if (report_out) *report_out = rep;
      if (!saw_elliptic)
        throw StagnationError("newton_solve: ellipticity cannot be maintained along the step");
      throw NewtonFailure("newton_solve: line search failed (residual " + std::to_string(rn) + ")",
                          best, rep);
    }
    xu.swap(tu);
    x = trial;
    r.swap(rt);
    const double prev = rn;
    rn = norm_inf(r);
    rep.residual_history.push_back(rn);
    rep.step_lengths.push_back(lambda);
    rep.iterations = it + 1;
    if (lambda == 1.0 && prev < 1e-2 && rn > 1e-13) ratios.push_back(rn / (prev * prev));
    if (rn < best_norm) {
      best_norm = rn;
      best = x;
    }
  }
  rep.converged = rn < opt.tol;
  rep.min_hp = info.min_hp;
  for (double q : ratios) rep.quadratic_ratio = std::max(rep.quadratic_ratio, q);
  if (report_out) *report_out = rep;
  if (!rep.converged) {
    std::ostringstream os;
    os << "newton_solve: no convergence after " << opt.max_iter << " iterations (residual "
       << best_norm << ")";
    throw NewtonFailure(os.str(), best, rep);
  }
  return x;
}

HeightField newton_solve(const HeightField& seed, const StratifiedBackground& bg,
                         const NewtonOptions& opt, NewtonReport* report) {
  HeightProblem prob(bg, seed.grid);
  return newton_solve(prob, seed, opt, report);
}

NodalDerivatives nodal_derivatives(const HeightField& f, const StratifiedBackground& bg) {
  const SlitGrid& g = f.grid;
  NodalDerivatives d;
  d.hp.assign(g.nodes(), 0.0);
  d.hq.assign(g.nodes(), 0.0);
  const double dq = g.dq();
  for (int r = 0; r < g.rows(); ++r) {
    const Layer l = g.layer(r);
    const double dp = g.dp(l);
    const int r0 = g.first_row(l), r1 = g.last_row(l);
    const double Hp = bg.H_p(g.p(r), l);
    for (int i = 0; i < g.nq(); ++i) {
      double wp;
      if (r == r0)
        wp = (-3.0 * f.at(i, r) + 4.0 * f.at(i, r + 1) - f.at(i, r + 2)) / (2.0 * dp);
      else if (r == r1)
        wp = (3.0 * f.at(i, r) - 4.0 * f.at(i, r - 1) + f.at(i, r - 2)) / (2.0 * dp);
      else
        wp = (f.at(i, r + 1) - f.at(i, r - 1)) / (2.0 * dp);
      double wq;
      if (i == g.nq() - 1)
        wq = (3.0 * f.at(i, r) - 4.0 * f.at(i - 1, r) + f.at(i - 2, r)) / (2.0 * dq);
      else if (i == 0 && !g.symmetric())
        wq = (-3.0 * f.at(i, r) + 4.0 * f.at(i + 1, r) - f.at(i + 2, r)) / (2.0 * dq);
      else
        wq = (f.sample(i + 1, r) - f.sample(i - 1, r)) / (2.0 * dq);
      d.hp[g.index(i, r)] = Hp + wp;
      d.hq[g.index(i, r)] = wq;
    }
  }
  return d;
}

HpExtremes hp_extremes(const HeightField& f, const StratifiedBackground& bg) {
  const NodalDerivatives d = nodal_derivatives(f, bg);
  HpExtremes e;
  e.min = *std::min_element(d.hp.begin(), d.hp.end());
  e.max = *std::max_element(d.hp.begin(), d.hp.end());
  const SlitGrid& g = f.grid;
  const int ic = g.symmetric() ? 0 : (g.nq() - 1) / 2;
  e.crest_min = d.hp[g.index(ic, 0)];
  for (int r = 0; r < g.rows(); ++r) e.crest_min = std::min(e.crest_min, d.hp[g.index(ic, r)]);
  return e;
}

namespace {

// 4-point Lagrange weights for x in node coordinates, stencil start s (nodes s..s+3).
std::array<double, 4> lagrange4(double x, int s) {
  std::array<double, 4> w{};
  for (int a = 0; a < 4; ++a) {
    double v = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) v *= (x - (s + b)) / static_cast<double>(a - b);
    w[a] = v;
  }
  return w;
}

}  // namespace

HeightField refine_and_transfer(const HeightField& f, const SlitGrid& ng) {
  const SlitGrid& og = f.grid;
  if (std::abs(og.p_hat() - ng.p_hat()) > 1e-14)
    throw InvalidInput("refine_and_transfer: grids disagree on p_hat (would interpolate across the slit)");
  if (og.symmetric() != ng.symmetric())
    throw InvalidInput("refine_and_transfer: symmetric and full grids cannot be mixed");
  HeightField out(ng, f.F);
  out.epsilon = f.epsilon;
  const double odq = og.dq();
  for (int i = 0; i < ng.nq(); ++i) {
    if (ng.dirichlet_column(i)) continue;
    const double q = ng.q(i);
    if (q >= og.L() || q <= -og.L()) continue;
    const double xq = (q - og.q0()) / odq;
    int sq = static_cast<int>(std::floor(xq)) - 1;
    if (og.symmetric()) sq = std::min(sq, og.nq() - 4);
    else sq = std::clamp(sq, 0, og.nq() - 4);
    const auto wq = lagrange4(xq, sq);
    for (int r = 1; r < ng.rows(); ++r) {
      const Layer l = ng.layer(r);
      const int r0 = og.first_row(l), r1 = og.last_row(l);
      const double p = ng.p(r);
      const double op0 = og.p(r0);
      const double xp = (p - op0) / og.dp(l);
      int sp = std::clamp(static_cast<int>(std::floor(xp)) - 1, 0, r1 - r0 - 3);
      const auto wp = lagrange4(xp, sp);
      double v = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) v += wq[a] * wp[b] * f.sample(sq + a, r0 + sp + b);
      out.at(i, r) = v;
    }
  }
  return out;
}

double default_length(double kappa, double factor, double lo, double hi) {
  if (!(kappa > 0.0)) return hi;
  return std::clamp(factor / kappa, lo, hi);
}

double crest_amplitude(const HeightField& f) {
  const SlitGrid& g = f.grid;
  const int ic = g.symmetric() ? 0 : (g.nq() - 1) / 2;
  return f.at(ic, g.iface_lower());
}

}  // namespace stratwave
