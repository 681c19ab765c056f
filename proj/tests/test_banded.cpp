#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "stratwave/banded.hpp"
#include "stratwave/error.hpp"

using namespace stratwave;

namespace {

struct Case {
  BandedMatrix band;
  Eigen::MatrixXd dense;
};

Case random_banded(int n, int kl, int ku, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Case c{BandedMatrix(n, kl, ku), Eigen::MatrixXd::Zero(n, n)};
  for (int j = 0; j < n; ++j)
    for (int i = std::max(0, j - ku); i <= std::min(n - 1, j + kl); ++i) {
      // weak diagonal so that pivoting actually happens
      const double v = u(rng) + (i == j ? 0.1 : 0.0);
      c.band.at(i, j) = v;
      c.dense(i, j) = v;
    }
  return c;
}

double solve_error(int n, int kl, int ku, bool transpose) {
  Case c = random_banded(n, kl, ku, 7u + n + kl);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b[i] = u(rng);
  const Eigen::VectorXd ref =
      transpose ? Eigen::VectorXd(c.dense.transpose().fullPivLu().solve(b))
                : Eigen::VectorXd(c.dense.fullPivLu().solve(b));
  std::vector<double> x(b.data(), b.data() + n);
  BandedLU lu(c.band);
  lu.solve(x, transpose);
  double err = 0.0;
  for (int i = 0; i < n; ++i) err = std::max(err, std::abs(x[i] - ref[i]));
  return err / ref.cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Banded, MultiplyMatchesDense) {
  Case c = random_banded(60, 4, 6, 1);
  std::vector<double> x(60), y(60), yt(60);
  for (int i = 0; i < 60; ++i) x[i] = std::sin(i + 0.3);
  c.band.multiply(x, y);
  c.band.multiply_transpose(x, yt);
  const Eigen::Map<Eigen::VectorXd> xv(x.data(), 60);
  const Eigen::VectorXd ref = c.dense * xv, reft = c.dense.transpose() * xv;
  for (int i = 0; i < 60; ++i) {
    EXPECT_NEAR(y[i], ref[i], 1e-13);
    EXPECT_NEAR(yt[i], reft[i], 1e-13);
  }
}

TEST(Banded, NarrowBandSolve) {
  EXPECT_LT(solve_error(200, 3, 3, false), 1e-10);
  EXPECT_LT(solve_error(200, 3, 5, true), 1e-10);
}

// The solver's Jacobians have half-bandwidths of 100+; blocked LAPACK band
// factorizations have been seen to break once kl exceeds their block size.
TEST(Banded, WideBandSolve) {
  EXPECT_LT(solve_error(1000, 65, 65, false), 1e-9);
  EXPECT_LT(solve_error(1000, 130, 130, false), 1e-9);
  EXPECT_LT(solve_error(800, 100, 100, true), 1e-9);
}

TEST(Banded, SingularPivotThrows) {
  BandedMatrix a(5, 1, 1);
  for (int i = 0; i < 5; ++i) a.at(i, i) = 1.0;
  a.at(2, 2) = 0.0;
  a.at(1, 2) = 0.0;
  a.at(3, 2) = 0.0;
  EXPECT_THROW(BandedLU lu(a), NumericalError);
}

TEST(Banded, GetOutsideBandIsZero) {
  BandedMatrix a(10, 2, 1);
  EXPECT_FALSE(a.in_band(0, 5));
  EXPECT_EQ(a.get(0, 5), 0.0);
  a.add(3, 4, 2.5);
  a.add(3, 4, 0.5);
  EXPECT_EQ(a.get(3, 4), 3.0);
}
