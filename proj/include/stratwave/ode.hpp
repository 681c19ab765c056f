#pragma once

#include <array>
#include <boost/numeric/odeint.hpp>
#include <exception>
#include <string>
#include <vector>

#include "stratwave/error.hpp"

namespace stratwave {

struct OdeOptions {
  double atol = 1e-12;
  double rtol = 1e-12;
  double max_dt = 0.0;  // 0: unbounded
  double dt0 = 1e-4;
};

// Integrates y' = rhs(t, y) with dense-output Dormand-Prince 5(4) and returns
// the state at each entry of `times` (increasing; times[0] is the start).
template <std::size_t N, class Rhs>
std::vector<std::array<double, N>> integrate_at(Rhs&& rhs, std::array<double, N> y0,
                                                const std::vector<double>& times,
                                                const OdeOptions& opt = {}) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, N>;
  std::vector<State> out;
  out.reserve(times.size());
  if (times.size() < 2) {
    out.push_back(y0);
    return out;
  }
  auto sys = [&rhs](const State& y, State& dy, double t) { rhs(t, y, dy); };
  auto obs = [&out](const State& y, double) { out.push_back(y); };
  const double span = times.back() - times.front();
  const double dt = std::min(opt.dt0, span);
  try {
    if (opt.max_dt > 0.0) {
      auto stepper = odeint::make_dense_output(opt.atol, opt.rtol, opt.max_dt,
                                               odeint::runge_kutta_dopri5<State>());
      odeint::integrate_times(stepper, sys, y0, times.begin(), times.end(), dt, obs);
    } else {
      auto stepper =
          odeint::make_dense_output(opt.atol, opt.rtol, odeint::runge_kutta_dopri5<State>());
      odeint::integrate_times(stepper, sys, y0, times.begin(), times.end(), dt, obs);
    }
  } catch (const std::exception& e) {
    const double reached = out.empty() ? times.front() : times[out.size() - 1];
    throw NumericalError("ODE integration failed after p = " + std::to_string(reached) + ": " +
                         e.what());
  }
  return out;
}

// Uniform nodes a = t0 < ... < tn = b.
inline std::vector<double> linspace(double a, double b, int n_intervals) {
  std::vector<double> t(static_cast<std::size_t>(n_intervals) + 1);
  for (int i = 0; i <= n_intervals; ++i)
    t[static_cast<std::size_t>(i)] = a + (b - a) * static_cast<double>(i) / n_intervals;
  t.back() = b;
  return t;
}

}  // namespace stratwave
