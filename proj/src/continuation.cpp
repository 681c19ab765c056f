#include "stratwave/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stratwave/diagnostics.hpp"
#include "stratwave/log.hpp"
#include "stratwave/sturm_liouville.hpp"

namespace stratwave {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::min_hp: return "min_hp";
    case StopReason::max_hp: return "max_hp";
    case StopReason::froude_bound: return "froude_bound";
    case StopReason::subcritical: return "subcritical";
    case StopReason::step_underflow: return "step_underflow";
    case StopReason::max_points: return "max_points";
  }
  return "unknown";
}

BranchPoint make_branch_point(HeightField field, const StratifiedBackground& bg, double F_cr,
                              double arc_s, int iterations) {
  BranchPoint b;
  const HpExtremes e = hp_extremes(field, bg);
  b.min_hp = e.min;
  b.max_hp = e.max;
  b.crest_min_hp = e.crest_min;
  b.amplitude = crest_amplitude(field);
  b.froude_slack = check_froude_upper_bound(field, bg).slack;
  b.stagnation_metric = stagnation_and_velocity(field, bg).stagnation_metric;
  b.flow_force_drift = flow_force_profile(field, bg).drift;
  b.N_s = blowup_functional(field, bg, F_cr);
  b.arc_s = arc_s;
  b.corrector_iterations = iterations;
  b.field = std::move(field);
  return b;
}

namespace {

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct Corrected {
  bool ok = false;
  std::vector<double> x;
  double F = 0.0;
  int iterations = 0;
  std::string why;
};

// Newton on the bordered system [R(x, F); t_v (v0 - v0c) + t_F (F - Fc) - ds].
Corrected correct(const HeightProblem& prob, std::vector<double> x, double F, long iv,
                  double tv, double tF, double v0c, double Fc, double ds, double F_cr,
                  const StepControl& sc, Exec exec) {
  Corrected out;
  const std::size_t n = prob.size();
  HeightField f(prob.grid(), F);
  std::vector<double> r(n), rF(n), y(n), z(n);
  BandedMatrix J = prob.make_matrix();
  double r0 = -1.0;
  for (int it = 0;; ++it) {
    f.F = F;
    prob.scatter(x, f);
    const ResidualInfo info = prob.residual(f, r, exec);
    if (!info.elliptic()) {
      out.why = "ellipticity lost";
      return out;
    }
    const double rn = inf_norm(r);
    const double g = tv * (x[iv] - v0c) + tF * (F - Fc) - ds;
    if (!std::isfinite(rn)) {
      out.why = "non-finite residual";
      return out;
    }
    if (rn < sc.tol && std::abs(g) < sc.tol) {
      out.ok = true;
      out.x = std::move(x);
      out.F = F;
      out.iterations = it;
      return out;
    }
    if (r0 < 0.0) r0 = std::max(rn, sc.tol);
    if (it >= sc.corrector_max_iter || rn > 1e3 * r0) {
      out.why = "corrector did not converge";
      return out;
    }
    prob.jacobian(f, J, exec);
    prob.residual_dF(f, rF);
    BandedLU lu(J);
    y = r;
    z = rF;
    lu.solve(y);
    lu.solve(z);
    const double den = tF - tv * z[iv];
    if (std::abs(den) < 1e-14) {
      out.why = "singular bordered system";
      return out;
    }
    const double dF = (-g + tv * y[iv]) / den;
    for (std::size_t k = 0; k < n; ++k) x[k] += -y[k] - dF * z[k];
    F += dF;
    if (!(F > F_cr)) {
      out.why = "corrector crossed F_cr";
      return out;
    }
  }
}

}  // namespace

BranchResult continue_branch(const BranchPoint& start, const StratifiedBackground& bg,
                             double F_cr, const BranchOptions& opt) {
  BranchResult res;
  if (!(start.field.F > F_cr)) throw InvalidInput("continue_branch: start is not supercritical");
  const StepControl& sc = opt.step;
  res.points.push_back(start);

  auto prob = std::make_unique<HeightProblem>(bg, start.field.grid);
  const SlitGrid* grid = &prob->grid();
  auto v0_index = [&]() {
    const int ic = grid->symmetric() ? 0 : (grid->nq() - 1) / 2;
    return grid->unknown(ic, grid->iface_lower());
  };
  long iv = v0_index();

  std::vector<double> x(prob->size()), xprev;
  prob->gather(start.field, x);
  double F = start.field.F, Fprev = 0.0;
  bool have_prev = false;
  double ds = sc.ds0;
  int streak = 0;
  double s = start.arc_s;

  auto stop_for = [&](const BranchPoint& b, StopReason& why) {
    if (b.min_hp < opt.stop.min_hp) why = StopReason::min_hp;
    else if (b.max_hp > opt.stop.max_hp) why = StopReason::max_hp;
    else if (b.froude_slack < opt.stop.froude_slack) why = StopReason::froude_bound;
    else return false;
    return true;
  };
  {
    StopReason why;
    if (stop_for(start, why)) {
      res.reason = why;
      res.message = "start point already beyond a stop threshold";
      return res;
    }
  }

  while (static_cast<int>(res.points.size()) < opt.stop.max_points) {
    // unit tangent in (v0, F) and the matching full-state direction
    std::vector<double> dir(x.size());
    double tv, tF;
    if (have_prev) {
      const double dv = x[iv] - xprev[iv], dF = F - Fprev;
      const double nrm = std::hypot(dv, dF);
      tv = dv / nrm;
      tF = dF / nrm;
      for (std::size_t k = 0; k < x.size(); ++k) dir[k] = (x[k] - xprev[k]) / nrm;
    } else {
      HeightField f(*grid, F);
      prob->scatter(x, f);
      BandedMatrix J = prob->make_matrix();
      prob->jacobian(f, J, opt.exec);
      std::vector<double> z(x.size());
      prob->residual_dF(f, z);
      BandedLU(J).solve(z);
      const double nrm = std::hypot(z[iv], 1.0);
      tv = -z[iv] / nrm;
      tF = 1.0 / nrm;
      for (std::size_t k = 0; k < x.size(); ++k) dir[k] = -z[k] / nrm;
    }

    Corrected c;
    for (;;) {
      std::vector<double> xp(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) xp[k] = x[k] + ds * dir[k];
      const double Fp = F + ds * tF;
      c = correct(*prob, std::move(xp), Fp, iv, tv, tF, x[iv], F, ds, F_cr, sc, opt.exec);
      if (c.ok) break;
      streak = 0;
      ds *= 0.5;
      std::ostringstream os;
      os << "continuation: step rejected (" << c.why << "), ds -> " << ds;
      log::info(os.str());
      if (ds < sc.ds_min) break;
    }
    if (!c.ok) {
      if (res.points.size() == 1)
        throw NumericalError("continue_branch: first corrector failed at the minimal step (" +
                             c.why + ")");
      res.reason = StopReason::step_underflow;
      res.message = "step size fell below " + std::to_string(sc.ds_min) + " (" + c.why + ")";
      return res;
    }

    xprev = std::move(x);
    Fprev = F;
    have_prev = true;
    x = std::move(c.x);
    F = c.F;
    s += ds;

    HeightField f(*grid, F);
    f.epsilon = epsilon_from_froude(1.0 / (F_cr * F_cr), F);
    prob->scatter(x, f);
    res.points.push_back(make_branch_point(std::move(f), bg, F_cr, s, c.iterations));
    const BranchPoint& b = res.points.back();
    {
      std::ostringstream os;
      os << "branch point " << res.points.size() - 1 << ": s=" << s << " F=" << F
         << " v0=" << b.amplitude << " min_hp=" << b.min_hp << " max_hp=" << b.max_hp
         << " iters=" << c.iterations << " ds=" << ds;
      log::info(os.str());
    }
    if (opt.on_point) opt.on_point(b);

    StopReason why;
    if (stop_for(b, why)) {
      res.reason = why;
      res.message = std::string("stop: ") + to_string(why);
      return res;
    }
    if (!(F > F_cr)) {
      res.reason = StopReason::subcritical;
      res.message = "branch returned to F_cr";
      return res;
    }

    if (c.iterations <= sc.easy_iterations) {
      if (++streak >= sc.easy_streak) {
        ds = std::min(ds * sc.grow, sc.ds_max);
        streak = 0;
      }
    } else {
      streak = 0;
    }

    if (opt.regrid) {
      const double kappa = decay_rate(bg, F);
      const double Lstar = default_length(kappa, opt.length_factor);
      if (grid->L() > opt.regrid_factor * Lstar) {
        const SlitGrid ng(Lstar, grid->nq(), grid->np_minus(), grid->np_plus(), grid->p_hat(),
                          grid->symmetric());
        HeightField moved = refine_and_transfer(res.points.back().field, ng);
        auto nprob = std::make_unique<HeightProblem>(bg, ng);
        NewtonOptions no;
        no.tol = sc.tol;
        no.exec = opt.exec;
        try {
          HeightField fixed = newton_solve(*nprob, moved, no);
          prob = std::move(nprob);
          grid = &prob->grid();
          iv = v0_index();
          x.assign(prob->size(), 0.0);
          prob->gather(fixed, x);
          have_prev = false;
          ++res.regrids;
          std::ostringstream os;
          os << "continuation: regrid to L=" << Lstar << " at F=" << F;
          log::info(os.str());
        } catch (const NumericalError& e) {
          log::warn(std::string("continuation: regrid failed, keeping the old grid: ") + e.what());
        }
      }
    }
  }
  res.reason = StopReason::max_points;
  res.message = "maximum number of branch points reached";
  return res;
}

}  // namespace stratwave
