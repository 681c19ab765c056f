#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>

#include "stratwave/background.hpp"
#include "stratwave/height_solver.hpp"
#include "stratwave/reduced_model.hpp"
#include "stratwave/sturm_liouville.hpp"

using namespace stratwave;

namespace {

struct Fixture {
  StratifiedBackground bg;
  HeightField seed;
  Fixture() {
    FluidParameters fp;
    PiecewiseProfile rho{-1.0, -0.5, 0.0, ScalarFunction::constant(1.02),
                         ScalarFunction::constant(1.0)};
    PiecewiseProfile us{-1.0, -0.5, 0.0, ScalarFunction::constant(1.0),
                        ScalarFunction::constant(1.0)};
    bg = make_background(fp, rho, us);
    const CriticalData cd = find_mu_cr(bg);
    const ReducedModel m = build_reduced_model(bg, cd);
    const double eps = 0.1;
    const SlitGrid g(default_length(eps * std::sqrt(m.B1)), 321, 65, 65, bg.p_hat());
    seed = elevation_ansatz(m, eps, g);
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void residual(benchmark::State& st, Exec exec) {
  Fixture& fx = fixture();
  HeightProblem prob(fx.bg, fx.seed.grid);
  std::vector<double> r(prob.size());
  for (auto _ : st) {
    prob.residual(fx.seed, r, exec);
    benchmark::DoNotOptimize(r.data());
  }
}

void jacobian(benchmark::State& st, Exec exec) {
  Fixture& fx = fixture();
  HeightProblem prob(fx.bg, fx.seed.grid);
  BandedMatrix J = prob.make_matrix();
  for (auto _ : st) {
    prob.jacobian(fx.seed, J, exec);
    benchmark::DoNotOptimize(J.data().data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(residual, serial, Exec::serial)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(residual, parallel, Exec::parallel)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(jacobian, serial, Exec::serial)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(jacobian, parallel, Exec::parallel)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
