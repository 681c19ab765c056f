#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "stratwave/sturm_liouville.hpp"

using namespace stratwave;

namespace {

// k-th positive root of f on ((k-1/2) pi, (k+1/2) pi) by bisection
template <class Fn>
double root_in(Fn f, double a, double b) {
  double fa = f(a);
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST(Shooting, ConstantCaseIsLinear) {
  const StratifiedBackground bg = oracle::constant_bg();
  const ShootingState s = shoot(bg, 2.0, 0.0);
  EXPECT_NEAR(s.phi, 1.0, 1e-10);
  EXPECT_NEAR(s.flux, 1.0, 1e-10);
  EXPECT_NEAR(eval_A(bg, 2.0), 1.0, 1e-10);
  EXPECT_NEAR(eval_A(bg, 0.25), -0.75, 1e-10);
}

TEST(Shooting, MatchesFixedStepRk4) {
  const StratifiedBackground bg = oracle::shear_bg();
  const double mu = 0.9;
  const ShootingState s = shoot(bg, mu, 0.0);
  // shoot starts from phi_p(-1) = 1, the RK4 oracle from the same flux
  EXPECT_NEAR(s.phi, oracle::rk4_phi_top(bg, mu, 50000), 1e-8);
}

TEST(Critical, ConstantDensity) {
  const CriticalData cd = find_mu_cr(oracle::constant_bg());
  EXPECT_NEAR(cd.mu_cr, 1.0, 1e-8);
  EXPECT_NEAR(cd.F_cr, 1.0, 1e-8);
  EXPECT_NEAR(cd.A_slope, 1.0, 1e-7);
  EXPECT_NEAR(cd.phi0(-0.5), 1.0, 1e-12);
  EXPECT_NEAR(cd.phi0(0.0), 2.0, 1e-9);
  EXPECT_NEAR(cd.psi_rescale, 2.0, 1e-9);
}

TEST(Critical, TwoLayerMatchesQuadratic) {
  const StratifiedBackground bg = oracle::two_layer_bg();
  const double a = bg.H_p(-0.9, Layer::lower), b = bg.H_p(-0.1, Layer::upper);
  const double exact = oracle::two_layer_mu_cr(a, b, 1.0, bg.rho_jump(), bg.p_hat());
  const CriticalData cd = find_mu_cr(bg);
  EXPECT_NEAR(cd.mu_cr, exact, 1e-9 * exact);
  // piecewise-constant coefficients: the finite elements are exact at any resolution
  EXPECT_NEAR(oracle::fe_mu_cr(bg, 64), exact, 1e-11);
}

TEST(Critical, ShearMatchesFiniteElementOracle) {
  const StratifiedBackground bg = oracle::shear_bg();
  const double c = oracle::fe_mu_cr(bg, 1024), f = oracle::fe_mu_cr(bg, 2048);
  const double ref = oracle::richardson(c, f);
  const CriticalData cd = find_mu_cr(bg);
  EXPECT_NEAR(cd.mu_cr, ref, 1e-7 * ref);
  EXPECT_GT(cd.A_slope, 0.0);
}

TEST(Spectrum, ConstantCaseTanRoots) {
  const StratifiedBackground bg = oracle::constant_bg();
  const std::vector<double> nu = transversal_spectrum(bg, 1.0, 4);
  ASSERT_EQ(nu.size(), 4u);
  EXPECT_NEAR(nu[0], 0.0, 1e-8);
  for (int k = 1; k < 4; ++k) {
    const double z = root_in([](double x) { return std::sin(x) - x * std::cos(x); },
                             k * M_PI + 1e-9, (k + 0.5) * M_PI - 1e-9);
    EXPECT_NEAR(nu[k], -z * z, 1e-6 * z * z) << k;
  }
}

TEST(Spectrum, DirichletConstantCase) {
  const std::vector<double> nu = dirichlet_spectrum(oracle::constant_bg(), 1.0, 3);
  ASSERT_EQ(nu.size(), 3u);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(nu[k], -std::pow((k + 1) * M_PI, 2), 1e-6 * (k + 1) * (k + 1));
}

TEST(Spectrum, StrictlyDecreasingAtCriticality) {
  for (const StratifiedBackground& bg : {oracle::two_layer_bg(), oracle::shear_bg()}) {
    const CriticalData cd = find_mu_cr(bg);
    const std::vector<double> nu = spectrum_at_criticality(bg, cd, 5);
    ASSERT_EQ(nu.size(), 5u);
    EXPECT_NEAR(nu[0], 0.0, 1e-8);
    for (int k = 1; k < 5; ++k) EXPECT_LT(nu[k], nu[k - 1]);
  }
}

TEST(Spectrum, DecayRateConstantCase) {
  const double F = 1.1, mu = 1.0 / (F * F);
  // w = exp(-k q) sin(k (p+1)) with k cos k = mu sin k
  const double k = root_in([mu](double x) { return x * std::cos(x) - mu * std::sin(x); }, 1e-6, M_PI / 2);
  EXPECT_NEAR(decay_rate(oracle::constant_bg(), F), k, 1e-7);
}

TEST(Spectrum, PrincipalEigenvalueChangesSignAtCriticality) {
  const StratifiedBackground bg = oracle::two_layer_bg();
  const CriticalData cd = find_mu_cr(bg);
  // supercritical (mu < mu_cr) disturbances decay: nu0 < 0
  EXPECT_LT(transversal_spectrum(bg, cd.mu_cr * 0.9, 1)[0], 0.0);
  EXPECT_GT(transversal_spectrum(bg, cd.mu_cr * 1.1, 1)[0], 0.0);
}
