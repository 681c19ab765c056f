#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "stratwave/error.hpp"

using namespace stratwave;

TEST(Background, ConstantCaseIsLinear) {
  const StratifiedBackground bg = oracle::constant_bg();
  EXPECT_NEAR(bg.p_hat(), -0.5, 1e-14);
  for (double p : {-0.9, -0.6, -0.2}) {
    const Layer l = bg.layer_of(p);
    EXPECT_NEAR(bg.H(p, l), p + 1.0, 1e-12);
    EXPECT_NEAR(bg.H_p(p, l), 1.0, 1e-12);
    EXPECT_NEAR(bg.beta_a(p, l), 0.0, 1e-12);
    EXPECT_NEAR(bg.beta_b(p, l), 0.0, 1e-12);
  }
  EXPECT_NEAR(bg.rho_jump(), 0.0, 1e-15);
  EXPECT_NEAR(bg.F_relation_constant(), 1.0, 1e-12);
}

TEST(Background, TwoLayerClosedForm) {
  const StratifiedBackground bg = oracle::two_layer_bg();
  // u* is rescaled so that int sqrt(rho) u* dy = 1
  const double k = 1.0 / (0.5 * std::sqrt(1.02) + 0.5);
  EXPECT_NEAR(bg.scale().ustar_factor, k, 1e-12);
  EXPECT_NEAR(bg.p_hat(), -0.5 * k, 1e-12);
  EXPECT_NEAR(bg.H_p(-0.8, Layer::lower), 1.0 / (std::sqrt(1.02) * k), 1e-10);
  EXPECT_NEAR(bg.H_p(-0.2, Layer::upper), 1.0 / k, 1e-10);
  EXPECT_NEAR(bg.H(bg.p_hat(), Layer::lower), 0.5, 1e-10);
  EXPECT_NEAR(bg.H(bg.p_hat(), Layer::upper), 0.5, 1e-10);
  EXPECT_NEAR(bg.H(0.0, Layer::upper), 1.0, 1e-10);
  EXPECT_NEAR(bg.rho_jump(), -0.02, 1e-12);
  EXPECT_NEAR(bg.rho_max(), 1.02, 1e-12);
}

TEST(Background, HeightSolvesTheSlopeEquation) {
  const StratifiedBackground bg = oracle::shear_bg();
  const double k = bg.scale().ustar_factor;
  for (double p : {-0.95, -0.7, bg.p_hat() - 1e-3, bg.p_hat() + 1e-3, -0.1, 0.0}) {
    const Layer l = bg.layer_of(p);
    const double y = bg.H(p, l) - 1.0;
    const double rho = l == Layer::lower ? 1.02 - 0.02 * y : 1.0 - 0.01 * y;
    const double u = k * (1.0 + 0.1 * y);
    EXPECT_NEAR(bg.H_p(p, l) * std::sqrt(rho) * u, 1.0, 1e-9) << p;
    EXPECT_NEAR(bg.rho(p, l), rho, 1e-10);
  }
  EXPECT_NEAR(bg.H(-1.0, Layer::lower), 0.0, 1e-10);
  EXPECT_NEAR(bg.H(0.0, Layer::upper), 1.0, 1e-9);
  EXPECT_NEAR(bg.H(bg.p_hat(), Layer::upper), 0.5, 1e-9);
}

TEST(Background, BernoulliDerivativeSplitsIntoBeta) {
  const StratifiedBackground bg = oracle::shear_bg();
  const double F = 1.3;
  for (double p : {-0.8, -0.3, -0.1}) {
    const Layer l = bg.layer_of(p);
    const double h = 1e-4;
    const double fd =
        (-bg.bernoulli_energy(p + 2 * h, l, F) + 8 * bg.bernoulli_energy(p + h, l, F) -
         8 * bg.bernoulli_energy(p - h, l, F) + bg.bernoulli_energy(p - 2 * h, l, F)) /
        (12 * h);
    EXPECT_NEAR(bg.beta(p, l, F), fd, 1e-8) << p;
  }
}

TEST(Background, PiIsIntegratedDensity) {
  const StratifiedBackground bg = oracle::two_layer_bg();
  EXPECT_NEAR(bg.pi(0.0, Layer::upper), 0.0, 1e-14);
  EXPECT_NEAR(bg.pi(bg.p_hat(), Layer::upper), 0.5, 1e-10);
  EXPECT_NEAR(bg.pi(-1.0, Layer::lower), 0.5 + 0.5 * 1.02, 1e-10);
}

TEST(Background, RejectsUnstableOrNonpositiveProfiles) {
  FluidParameters fp;
  EXPECT_THROW(make_background(fp, oracle::expr_profile("1 + y", "1"),
                               oracle::expr_profile("1", "1")),
               InvalidInput);
  EXPECT_THROW(make_background(fp, oracle::expr_profile("1", "1.1"),
                               oracle::expr_profile("1", "1")),
               InvalidInput);
  EXPECT_THROW(make_background(fp, oracle::expr_profile("1", "1"),
                               oracle::expr_profile("1", "y")),
               InvalidInput);
  fp.g = -1.0;
  EXPECT_THROW(make_background(fp, oracle::expr_profile("1", "1"),
                               oracle::expr_profile("1", "1")),
               InvalidInput);
}

TEST(Background, StrictNormalizationWithoutRescale) {
  FluidParameters fp;
  NondimOptions opt;
  opt.auto_rescale = false;
  EXPECT_THROW(nondimensionalize(fp, oracle::expr_profile("1", "1"),
                                 oracle::expr_profile("2", "2"), opt),
               InvalidInput);
}

TEST(Background, DimensionalScales) {
  FluidParameters fp;
  fp.g = 9.81;
  fp.d_plus = 20.0;
  fp.d_minus = 30.0;
  fp.c = 5.0;
  const ScaledProfiles s = nondimensionalize(
      fp, oracle::profile(ScalarFunction::constant(1025.0), ScalarFunction::constant(1020.0), 50.0, 20.0),
      oracle::profile(ScalarFunction::constant(3.0), ScalarFunction::constant(3.0), 50.0, 20.0));
  EXPECT_NEAR(s.density.breakpoint, -0.4, 1e-14);
  EXPECT_NEAR(s.scale.rho0, 1020.0, 1e-12);
  EXPECT_NEAR(s.scale.sqrt_gd, std::sqrt(9.81 * 50.0), 1e-12);
  EXPECT_NEAR(s.params.c, 5.0 / std::sqrt(9.81 * 50.0), 1e-12);
  EXPECT_NEAR(s.density.upper(-0.1), 1.0, 1e-14);
  EXPECT_NEAR(s.density.lower(-0.9), 1025.0 / 1020.0, 1e-14);
}
