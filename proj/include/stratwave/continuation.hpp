#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stratwave/height_solver.hpp"

namespace stratwave {

struct BranchPoint {
  HeightField field;
  double arc_s = 0.0;
  double N_s = 0.0;          // blow-up functional
  double amplitude = 0.0;    // w(0, p_hat)
  double min_hp = 0.0, max_hp = 0.0, crest_min_hp = 0.0;
  double froude_slack = 0.0;
  double stagnation_metric = 0.0;
  double flow_force_drift = 0.0;
  int corrector_iterations = 0;
};

BranchPoint make_branch_point(HeightField field, const StratifiedBackground& bg, double F_cr,
                              double arc_s = 0.0, int iterations = 0);

struct StepControl {
  double ds0 = 2e-3;
  double ds_min = 1e-7;
  double ds_max = 5e-2;
  double grow = 1.3;
  int easy_iterations = 4;  // a step is easy if the corrector needs at most this many
  int easy_streak = 2;      // consecutive easy steps before growing
  int corrector_max_iter = 10;
  double tol = 1e-10;
};

struct StopCriteria {
  double min_hp = 0.05;
  double max_hp = 20.0;  // sup h_p, the stagnation side
  double froude_slack = -1e-8;
  int max_points = 400;
};

enum class StopReason { min_hp, max_hp, froude_bound, subcritical, step_underflow, max_points };
const char* to_string(StopReason r);
// min_hp / max_hp are the stagnation-boundary stops
inline bool is_stagnation(StopReason r) {
  return r == StopReason::min_hp || r == StopReason::max_hp;
}

struct BranchOptions {
  StepControl step;
  StopCriteria stop;
  Exec exec = Exec::parallel;
  bool regrid = true;
  double regrid_factor = 1.5;  // regrid when L exceeds this multiple of the preferred length
  double length_factor = 60.0;
  std::function<void(const BranchPoint&)> on_point;  // called for every accepted point
};

struct BranchResult {
  std::vector<BranchPoint> points;
  StopReason reason = StopReason::max_points;
  std::string message;
  int regrids = 0;
};

// Pseudo-arclength continuation in (w(0, p_hat), F) from a converged start.
BranchResult continue_branch(const BranchPoint& start, const StratifiedBackground& bg,
                             double F_cr, const BranchOptions& opt = {});

}  // namespace stratwave
