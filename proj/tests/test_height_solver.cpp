#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "stratwave/reduced_model.hpp"

using namespace stratwave;

namespace {

struct Wave {
  StratifiedBackground bg;
  ReducedModel model;
  HeightField seed, sol;
  NewtonReport rep;
};

const Wave& two_layer_wave() {
  static const Wave w = [] {
    Wave out;
    out.bg = oracle::two_layer_bg();
    out.model = build_reduced_model(out.bg, find_mu_cr(out.bg));
    const SlitGrid g(40.0, 81, 17, 17, out.bg.p_hat());
    out.seed = elevation_ansatz(out.model, 0.15, g);
    out.sol = newton_solve(out.seed, out.bg, {}, &out.rep);
    return out;
  }();
  return w;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> mat_vec(const BandedMatrix& J, const std::vector<double>& x) {
  std::vector<double> y(x.size());
  J.multiply(x, y);
  return y;
}

}  // namespace

TEST(Residual, LaminarFlowIsASolution) {
  for (const StratifiedBackground& bg : {oracle::constant_bg(), oracle::shear_bg()}) {
    const SlitGrid g(10.0, 21, 9, 11, bg.p_hat());
    for (double F : {0.8, 1.3}) {
      ResidualInfo info;
      const std::vector<double> r = assemble_residual(HeightField(g, F), bg, &info);
      EXPECT_LT(inf_norm(r), 1e-13);
      EXPECT_TRUE(info.elliptic());
    }
  }
}

TEST(Residual, RejectsMismatchedGrid) {
  const StratifiedBackground bg = oracle::two_layer_bg();
  EXPECT_THROW(HeightProblem(bg, SlitGrid(10.0, 21, 9, 9, -0.5)), InvalidInput);
}

TEST(Jacobian, MatchesCentralDifferences) {
  const Wave& w = two_layer_wave();
  const HeightProblem prob(w.bg, w.seed.grid);
  BandedMatrix J = prob.make_matrix();
  prob.jacobian(w.seed, J);
  std::mt19937 rng(11);
  std::normal_distribution<double> nd;
  const std::size_t n = prob.size();
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> x(n), d(n);
    prob.gather(w.seed, x);
    for (double& v : d) v = nd(rng);
    const double h = 1e-6;
    auto shifted = [&](double s) {
      std::vector<double> xs(n);
      for (std::size_t k = 0; k < n; ++k) xs[k] = x[k] + s * d[k];
      HeightField f = w.seed;
      prob.scatter(xs, f);
      std::vector<double> r(n);
      prob.residual(f, r);
      return r;
    };
    const std::vector<double> rp = shifted(h), rm = shifted(-h), Jd = mat_vec(J, d);
    double err = 0.0;
    for (std::size_t k = 0; k < n; ++k) err = std::max(err, std::abs((rp[k] - rm[k]) / (2 * h) - Jd[k]));
    EXPECT_LT(err / inf_norm(Jd), 1e-6);
  }
}

TEST(Jacobian, FroudeDerivative) {
  const Wave& w = two_layer_wave();
  const HeightProblem prob(w.bg, w.sol.grid);
  std::vector<double> dF(prob.size()), rp(prob.size()), rm(prob.size());
  prob.residual_dF(w.sol, dF);
  const double h = 1e-6;
  HeightField a = w.sol, b = w.sol;
  a.F += h;
  b.F -= h;
  prob.residual(a, rp);
  prob.residual(b, rm);
  double err = 0.0;
  for (std::size_t k = 0; k < dF.size(); ++k) err = std::max(err, std::abs((rp[k] - rm[k]) / (2 * h) - dF[k]));
  EXPECT_LT(err / inf_norm(dF), 1e-7);
}

TEST(Assembly, SerialAndParallelAgreeBitwise) {
  const Wave& w = two_layer_wave();
  const std::vector<double> rs = assemble_residual(w.seed, w.bg, nullptr, Exec::serial);
  const std::vector<double> rp = assemble_residual(w.seed, w.bg, nullptr, Exec::parallel);
  EXPECT_EQ(rs, rp);
  const BandedMatrix js = assemble_jacobian(w.seed, w.bg, Exec::serial);
  const BandedMatrix jp = assemble_jacobian(w.seed, w.bg, Exec::parallel);
  EXPECT_EQ(js.data(), jp.data());
}

TEST(Newton, ConvergesQuadraticallyFromAnsatz) {
  const Wave& w = two_layer_wave();
  EXPECT_TRUE(w.rep.converged);
  EXPECT_LE(w.rep.iterations, 8);
  EXPECT_LT(w.rep.residual_history.back(), 1e-10);
  EXPECT_LT(w.rep.quadratic_ratio, 1e3);
  // elevation wave of the size predicted by the reduced model
  const double v0 = crest_amplitude(w.sol);
  const double pred = sech_seed(w.model, 0.15, 0.0, SeedSign::elevation).v;
  EXPECT_GT(v0, 0.0);
  EXPECT_NEAR(v0, pred, 0.15 * pred);
}

TEST(Newton, RightHandSideIsHonoured) {
  const StratifiedBackground bg = oracle::shear_bg();
  oracle::Manufactured m{bg};
  const SlitGrid g(m.L, 17, 9, 9, bg.p_hat());
  const HeightProblem prob(bg, g);
  const std::vector<double> b = m.rhs(g);
  NewtonReport rep;
  const HeightField sol = newton_solve(prob, HeightField(g, m.F), {}, &rep, b);
  std::vector<double> r(prob.size());
  prob.residual(sol, r);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] -= b[k];
  EXPECT_LT(inf_norm(r), 1e-10);
}

TEST(Newton, ManufacturedSolutionIsSecondOrder) {
  oracle::Manufactured m{oracle::shear_bg()};
  const double e1 = m.error(17, 9), e2 = m.error(33, 17), e3 = m.error(65, 33);
  EXPECT_NEAR(oracle::slope(e1, e2), 2.0, 0.25);
  EXPECT_NEAR(oracle::slope(e2, e3), 2.0, 0.1);
}

TEST(Newton, NonEllipticSeedRejected) {
  const StratifiedBackground bg = oracle::constant_bg();
  const SlitGrid g(10.0, 11, 9, 9, bg.p_hat());
  HeightField f(g, 1.2);
  for (int i = 0; i < g.nq() - 1; ++i) f.at(i, 1) = -2.0;
  EXPECT_THROW(newton_solve(f, bg), InvalidInput);
}

TEST(Symmetry, MirroredSolutionSolvesTheFullProblem) {
  const Wave& w = two_layer_wave();
  const HeightField full = mirror_to_full(w.sol);
  EXPECT_EQ(full.grid.nq(), 2 * w.sol.grid.nq() - 1);
  EXPECT_LT(inf_norm(assemble_residual(full, w.bg)), 1e-9);
}

// On the full strip the translation mode w_q is an approximate kernel direction; the
// half grid excludes it through the evenness wall.
TEST(Symmetry, TranslationModeOnlyOnFullGrid) {
  const Wave& w = two_layer_wave();
  const HeightField full = mirror_to_full(w.sol);
  const HeightProblem prob(w.bg, full.grid);
  BandedMatrix J = prob.make_matrix();
  prob.jacobian(full, J);
  HeightField dq(full.grid, full.F);
  const int R = full.grid.rows();
  for (int i = 1; i + 1 < full.grid.nq(); ++i)
    for (int r = 0; r < R; ++r)
      dq.at(i, r) = (full.at(i + 1, r) - full.at(i - 1, r)) / (2 * full.grid.dq());
  std::vector<double> x(prob.size());
  prob.gather(dq, x);
  const double kernel = inf_norm(mat_vec(J, x)) / inf_norm(x);
  const double sigma_full = oracle::sigma_min(J);
  const BandedMatrix Jh = assemble_jacobian(w.sol, w.bg);
  const double sigma_half = oracle::sigma_min(Jh);
  EXPECT_LT(kernel, 0.05);
  EXPECT_LT(sigma_full, 0.2 * sigma_half);
}

TEST(Transfer, LaminarStaysLaminar) {
  const StratifiedBackground bg = oracle::two_layer_bg();
  const SlitGrid a(20.0, 21, 9, 9, bg.p_hat()), b(30.0, 61, 17, 13, bg.p_hat());
  EXPECT_EQ(refine_and_transfer(HeightField(a, 1.1), b).max_abs(), 0.0);
}

TEST(Transfer, EvenPolynomialsAreReproduced) {
  const StratifiedBackground bg = oracle::two_layer_bg();
  const SlitGrid a(20.0, 41, 17, 17, bg.p_hat()), b(20.0, 61, 25, 21, bg.p_hat());
  auto fn = [&](double q, double p, Layer l) {
    const double s = l == Layer::lower ? 1.0 : -0.5;
    return (p + 1.0) * (1.0 + s * (p - bg.p_hat())) * (1.0 - q * q / 400.0);
  };
  HeightField f(a, 1.1);
  for (int i = 0; i < a.nq(); ++i)
    for (int r = 0; r < a.rows(); ++r) f.at(i, r) = fn(a.q(i), a.p(r), a.layer(r));
  const HeightField t = refine_and_transfer(f, b);
  for (int i = 0; i < b.nq(); ++i)
    for (int r = 0; r < b.rows(); ++r)
      EXPECT_NEAR(t.at(i, r), fn(b.q(i), b.p(r), b.layer(r)), 1e-12);
}

TEST(Transfer, RefinedSolutionReconvergesQuickly) {
  const Wave& w = two_layer_wave();
  const SlitGrid fine(40.0, 161, 33, 33, w.bg.p_hat());
  const HeightField t = refine_and_transfer(w.sol, fine);
  NewtonReport rep;
  newton_solve(t, w.bg, {}, &rep);
  EXPECT_LE(rep.iterations, 3);
  // there and back again
  const HeightField back = refine_and_transfer(t, w.sol.grid);
  for (std::size_t k = 0; k < back.w.size(); ++k) EXPECT_NEAR(back.w[k], w.sol.w[k], 1e-14);
}

TEST(Transfer, RejectsIncompatibleGrids) {
  const Wave& w = two_layer_wave();
  EXPECT_THROW(refine_and_transfer(w.sol, SlitGrid(40.0, 81, 17, 17, -0.5)), InvalidInput);
  EXPECT_THROW(refine_and_transfer(w.sol, SlitGrid(40.0, 81, 17, 17, w.bg.p_hat(), false)),
               InvalidInput);
}

TEST(Linearization, InvertibleSupercriticalSingularAtCriticality) {
  const StratifiedBackground bg = oracle::two_layer_bg();
  const CriticalData cd = find_mu_cr(bg);
  const SlitGrid g(40.0, 81, 33, 33, bg.p_hat());
  const BandedMatrix J_sup = assemble_jacobian(HeightField(g, 1.2 * cd.F_cr), bg);
  const BandedMatrix J_cr = assemble_jacobian(HeightField(g, cd.F_cr), bg);
  HeightField dir(g, cd.F_cr);
  for (int i = 0; i < g.nq(); ++i)
    for (int r = 0; r < g.rows(); ++r)
      dir.at(i, r) = std::cos(M_PI * g.q(i) / (2 * g.L())) * cd.phi0.value(g.p(r), g.layer(r));
  const HeightProblem prob(bg, g);
  std::vector<double> x(prob.size());
  prob.gather(dir, x);
  const double q_sup = inf_norm(mat_vec(J_sup, x)) / inf_norm(x);
  const double q_cr = inf_norm(mat_vec(J_cr, x)) / inf_norm(x);
  EXPECT_LT(q_cr, 1e-2 * q_sup);
  EXPECT_GT(oracle::sigma_min(J_sup), 50.0 * oracle::sigma_min(J_cr));
}

TEST(Geometry, DefaultLengthAndExtremes) {
  EXPECT_DOUBLE_EQ(default_length(1.0), 60.0);
  EXPECT_DOUBLE_EQ(default_length(10.0), 20.0);
  EXPECT_DOUBLE_EQ(default_length(1e-4), 400.0);
  const Wave& w = two_layer_wave();
  const HpExtremes e = hp_extremes(w.sol, w.bg);
  EXPECT_LT(e.min, e.max);
  EXPECT_LE(e.min, e.crest_min);
  const NodalDerivatives nd = nodal_derivatives(w.sol, w.bg);
  EXPECT_EQ(nd.hp.size(), w.sol.w.size());
}
