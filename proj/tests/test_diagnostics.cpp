#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "stratwave/diagnostics.hpp"

using namespace stratwave;

namespace {

struct Solved {
  StratifiedBackground bg;
  ReducedModel model;
  HeightField sol;
};

const Solved& two_layer() {
  static const Solved s = [] {
    Solved out;
    out.bg = oracle::two_layer_bg();
    out.model = build_reduced_model(out.bg, find_mu_cr(out.bg));
    const SlitGrid g(40.0, 81, 17, 17, out.bg.p_hat());
    out.sol = newton_solve(elevation_ansatz(out.model, 0.15, g), out.bg);
    return out;
  }();
  return s;
}

}  // namespace

TEST(FlowForce, LaminarIsUniform) {
  const StratifiedBackground bg = oracle::shear_bg();
  const SlitGrid g(10.0, 11, 9, 9, bg.p_hat());
  const HeightField f(g, 1.3);
  const FlowForceReport r = flow_force_profile(f, bg);
  EXPECT_EQ(r.S.size(), 11u);
  EXPECT_NEAR(r.drift, 0.0, 1e-14);
  EXPECT_NEAR(r.mean, flow_force_laminar(bg, g, 1.3), 1e-14);
}

TEST(FlowForce, NearlyConstantOnAWave) {
  const Solved& s = two_layer();
  const FlowForceReport r = flow_force_profile(s.sol, s.bg);
  EXPECT_LT(r.drift, 1e-3 * std::abs(r.mean));
  EXPECT_NEAR(r.S.back(), r.laminar, 1e-12);
}

TEST(Identity, LaminarAndWave) {
  const StratifiedBackground bg = oracle::two_layer_bg();
  const SlitGrid g(10.0, 11, 9, 9, bg.p_hat());
  const IdentityReport lam = check_flow_force_identity(HeightField(g, 1.2), bg);
  EXPECT_EQ(lam.lhs, 0.0);
  EXPECT_EQ(lam.rhs, 0.0);
  const Solved& s = two_layer();
  const IdentityReport id = check_flow_force_identity(s.sol, s.bg);
  EXPECT_GT(id.rhs, 0.0);
  EXPECT_LT(id.residual, 0.02 * id.rhs);
  HeightField bad = s.sol;
  for (int r = 1; r < bad.grid.rows(); ++r) bad.at(0, r) *= 1.3;
  EXPECT_GT(check_flow_force_identity(bad, s.bg).residual, 10.0 * id.residual);
}

TEST(FroudeBound, HomogeneousLaminarGivesSqrtTwo) {
  const StratifiedBackground bg = oracle::constant_bg();
  const SlitGrid g(10.0, 11, 9, 9, bg.p_hat());
  const FroudeBoundReport below = check_froude_upper_bound(HeightField(g, 1.41), bg);
  const FroudeBoundReport above = check_froude_upper_bound(HeightField(g, 1.415), bg);
  EXPECT_NEAR(below.bound, 2.0, 1e-12);
  EXPECT_TRUE(below.ok());
  EXPECT_FALSE(above.ok());
  EXPECT_TRUE(check_froude_upper_bound(two_layer().sol, two_layer().bg).ok());
}

TEST(Nodal, WaveSatisfiesAllSigns) {
  const Solved& s = two_layer();
  const NodalReport n = check_nodal(s.sol);
  EXPECT_TRUE(n.all_ok()) << format_report(diagnose(s.sol, s.bg));
  EXPECT_GT(n.band, 0.0);
}

TEST(Nodal, DetectsViolations) {
  const Solved& s = two_layer();
  const SlitGrid& g = s.sol.grid;
  HeightField depression = s.sol;
  for (double& v : depression.w) v = -v;
  const NodalReport d = check_nodal(depression);
  EXPECT_FALSE(d.elevation_ok);
  EXPECT_FALSE(d.wq_ok);
  HeightField bump = s.sol;
  const int i = g.nq() / 3;
  for (int r = 1; r < g.rows(); ++r) bump.at(i, r) += 0.5 * s.sol.at(0, r);
  EXPECT_FALSE(check_nodal(bump).wq_ok);
  HeightField shifted = s.sol;
  for (int k = 0; k + 4 < g.nq() - 1; ++k)
    for (int r = 0; r < g.rows(); ++r) shifted.at(k, r) = s.sol.at(k + 4, r);
  EXPECT_FALSE(check_nodal(shifted).symmetry_ok);
  EXPECT_TRUE(check_nodal(HeightField(g, 1.1)).trivial);
}

TEST(Velocity, LaminarStagnationMetric) {
  const StratifiedBackground bg = oracle::constant_bg();
  const SlitGrid g(10.0, 11, 9, 9, bg.p_hat());
  const VelocityReport v = stagnation_and_velocity(HeightField(g, 1.2), bg);
  EXPECT_NEAR(v.stagnation_metric, 1.0, 1e-12);
  EXPECT_NEAR(v.velocity_sup, 1.0, 1e-12);
  const Solved& s = two_layer();
  EXPECT_LT(stagnation_and_velocity(s.sol, s.bg).stagnation_metric,
            stagnation_and_velocity(HeightField(s.sol.grid, s.sol.F), s.bg).stagnation_metric);
}

TEST(Blowup, LaminarValue) {
  const StratifiedBackground bg = oracle::constant_bg();
  const SlitGrid g(10.0, 11, 9, 9, bg.p_hat());
  EXPECT_NEAR(blowup_functional(HeightField(g, 1.2), bg, 1.0), 1.0 + 1.2 + 5.0, 1e-10);
}

// On a truncated strip the critical problem keeps a small nontrivial solution whose size
// falls like 1/L^2; Newton from the ansatz lands on it rather than on w = 0.
TEST(Triviality, CriticalWaveShrinksWithTheStrip) {
  const Solved& s = two_layer();
  const double F_cr = s.model.critical.F_cr;
  auto at_length = [&](double L) {
    const SlitGrid g(L, static_cast<int>(2 * L) + 1, 17, 17, s.bg.p_hat());
    return check_critical_triviality(s.bg, s.model, g, F_cr, 0.03);
  };
  const TrivialityReport a = at_length(40.0), b = at_length(80.0);
  ASSERT_TRUE(a.converged) << a.message;
  ASSERT_TRUE(b.converged) << b.message;
  EXPECT_LT(a.w_inf, a.seed_inf);
  EXPECT_NEAR(a.w_inf / b.w_inf, 4.0, 1.0);
  const double F = 1.05 * F_cr;
  const SlitGrid g = s.sol.grid;
  const TrivialityReport above = check_critical_triviality(
      s.bg, s.model, g, F, epsilon_from_froude(s.model.critical.mu_cr, F));
  EXPECT_TRUE(above.converged) << above.message;
  EXPECT_GT(above.w_inf, 1e-3);
}

TEST(Report, ContainsKeyValueBlock) {
  const Solved& s = two_layer();
  const std::string txt = format_report(diagnose(s.sol, s.bg, s.model.critical.F_cr));
  EXPECT_NE(txt.find("[diagnostics]"), std::string::npos);
  EXPECT_NE(txt.find("flow_force_drift"), std::string::npos);
}
