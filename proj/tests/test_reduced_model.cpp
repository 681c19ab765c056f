#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "stratwave/reduced_model.hpp"

using namespace stratwave;

namespace {

struct Closed {
  double B1, B2;
};

// phi0 is piecewise linear for piecewise-constant rho and u*
Closed two_layer_coefficients(const StratifiedBackground& bg, double mu) {
  const double a = bg.H_p(-0.9, Layer::lower), b = bg.H_p(-0.1, Layer::upper);
  const double ph = bg.p_hat(), J = bg.rho_jump();
  const double s_lo = 1.0 / (ph + 1.0);
  const double g_up = s_lo / (a * a * a) + mu * J;
  const double s_up = g_up * b * b * b;
  const double top = 1.0 + s_up * (-ph);
  const double D = (ph + 1.0) / (3.0 * a) + (-ph) * (1.0 + top + top * top) / (3.0 * b);
  const double B1 = (top * top - J) / D;  // rho0 = 1, phi0(p_hat) = 1
  const double B2 =
      -1.5 * ((ph + 1.0) * std::pow(s_lo, 3) / std::pow(a, 4) + (-ph) * std::pow(s_up, 3) / std::pow(b, 4)) / D;
  return {B1, B2};
}

}  // namespace

TEST(Reduced, ConstantDensityCoefficients) {
  const StratifiedBackground bg = oracle::constant_bg();
  const ReducedModel m = build_reduced_model(bg, find_mu_cr(bg));
  EXPECT_NEAR(m.B1, 3.0, 1e-8);
  EXPECT_NEAR(m.B2, -9.0, 1e-8);
  EXPECT_NEAR(m.B2_psi, -4.5, 1e-8);
  EXPECT_NEAR(m.denom, 4.0 / 3.0, 1e-10);
  EXPECT_NEAR(m.B1_multiplier, m.B1, 1e-8);
  EXPECT_NEAR(m.B2_multiplier, m.B2, 1e-7);
}

TEST(Reduced, TwoLayerClosedForm) {
  const StratifiedBackground bg = oracle::two_layer_bg();
  const CriticalData cd = find_mu_cr(bg);
  const ReducedModel m = build_reduced_model(bg, cd);
  const Closed c = two_layer_coefficients(bg, cd.mu_cr);
  EXPECT_NEAR(m.B1, c.B1, 1e-8 * std::abs(c.B1));
  EXPECT_NEAR(m.B2, c.B2, 1e-8 * std::abs(c.B2));
  EXPECT_NEAR(m.B1_multiplier, m.B1, 1e-7 * m.B1);
  EXPECT_NEAR(m.B2_multiplier, m.B2, 1e-7 * std::abs(m.B2));
}

TEST(Reduced, CorrectionsSatisfyGaugeAndBottom) {
  const StratifiedBackground bg = oracle::shear_bg();
  const ReducedModel m = build_reduced_model(bg, find_mu_cr(bg));
  for (const LayeredFunction* K : {&m.K1, &m.K2}) {
    EXPECT_NEAR(K->value(-1.0, Layer::lower), 0.0, 1e-10);
    EXPECT_NEAR(K->value(bg.p_hat(), Layer::lower), 0.0, 1e-9);
    EXPECT_NEAR(K->value(bg.p_hat(), Layer::upper), 0.0, 1e-9);
  }
  EXPECT_NEAR(m.B1_multiplier, m.B1, 1e-7 * m.B1);
  EXPECT_NEAR(m.B2_multiplier, m.B2, 1e-6 * std::abs(m.B2));
}

TEST(Reduced, Phi0RequiresNormalization) {
  const StratifiedBackground bg = oracle::constant_bg();
  CriticalData cd = find_mu_cr(bg);
  cd.phi0 = cd.phi0.scaled(2.0);
  EXPECT_THROW(compute_B1(bg, cd), InvalidInput);
}

TEST(Sech, SubstitutionResidual) {
  const StratifiedBackground bg = oracle::two_layer_bg();
  const ReducedModel m = build_reduced_model(bg, find_mu_cr(bg));
  for (double eps : {0.05, 0.2}) {
    double worst_e = 0.0, worst_p = 0.0;
    for (int k = -2000; k <= 2000; ++k) {
      const double q = 50.0 * k / 2000.0;
      const InterfaceSeed e = sech_seed(m, eps, q, SeedSign::elevation);
      const InterfaceSeed p = sech_seed(m, eps, q, SeedSign::printed);
      worst_e = std::max(worst_e, std::abs(e.d2v - m.B1 * eps * eps * e.v - m.B2 * e.v * e.v));
      worst_p = std::max(worst_p, std::abs(p.d2v - m.B1 * eps * eps * p.v + m.B2 * p.v * p.v));
    }
    EXPECT_LT(worst_e, 1e-10);
    EXPECT_LT(worst_p, 1e-10);
  }
}

TEST(Sech, DerivativesMatchDifferences) {
  const StratifiedBackground bg = oracle::constant_bg();
  const ReducedModel m = build_reduced_model(bg, find_mu_cr(bg));
  const double eps = 0.1, h = 1e-4;
  for (double q : {-7.0, -0.3, 2.0, 11.0}) {
    const auto v = [&](double x) { return sech_seed(m, eps, x).v; };
    EXPECT_NEAR(sech_seed(m, eps, q).dv, (v(q + h) - v(q - h)) / (2 * h), 1e-10);
    EXPECT_NEAR(sech_seed(m, eps, q).d2v, (v(q + h) - 2 * v(q) + v(q - h)) / (h * h), 1e-8);
  }
  // printed branch amplitude 3 B1 eps^2 / (2 B2) with the phi0(p_hat) = 1 scaling
  EXPECT_NEAR(sech_seed(m, eps, 0.0, SeedSign::printed).v, 3 * 3 * 0.01 / (2 * -9.0), 1e-12);
  EXPECT_NEAR(sech_seed(m, eps, 0.0, SeedSign::elevation).v, 0.005, 1e-12);
}

TEST(Sech, FroudeEpsilonRoundTrip) {
  const double mu = 0.97;
  const double F = froude_from_epsilon(mu, 0.1);
  EXPECT_NEAR(F, 1.0 / std::sqrt(0.96), 1e-14);
  EXPECT_NEAR(epsilon_from_froude(mu, F), 0.1, 1e-12);
  EXPECT_EQ(epsilon_from_froude(mu, 0.5), 0.0);
  EXPECT_THROW(froude_from_epsilon(mu, 1.0), InvalidInput);
}

TEST(Ansatz, InterfaceTraceIsTheSeed) {
  const StratifiedBackground bg = oracle::constant_bg();
  const ReducedModel m = build_reduced_model(bg, find_mu_cr(bg));
  const SlitGrid g(40.0, 41, 9, 9, bg.p_hat());
  const HeightField f = elevation_ansatz(m, 0.1, g);
  for (int i : {0, 5, 20}) {
    EXPECT_NEAR(f.at(i, g.iface_lower()), sech_seed(m, 0.1, g.q(i), SeedSign::elevation).v, 1e-12);
    EXPECT_EQ(f.at(i, 0), 0.0);
  }
  EXPECT_EQ(f.at(g.nq() - 1, g.iface_lower()), 0.0);
  EXPECT_NEAR(f.F, froude_from_epsilon(1.0, 0.1), 1e-8);
  EXPECT_THROW(elevation_ansatz(m, 0.1, SlitGrid(40.0, 41, 9, 9, -0.4)), InvalidInput);
}
