#pragma once

#include <string>
#include <vector>

#include "stratwave/background.hpp"
#include "stratwave/grid.hpp"
#include "stratwave/reduced_model.hpp"

namespace stratwave {

// Flow force of one q-column (midpoint rule per cell, both layers).
double flow_force(const HeightField& f, const StratifiedBackground& bg, int column);
// Same quadrature applied to the laminar height H.
double flow_force_laminar(const StratifiedBackground& bg, const SlitGrid& grid, double F);

struct FlowForceReport {
  std::vector<double> S;  // per column, Dirichlet column included
  double mean = 0.0;
  double drift = 0.0;     // max |S_i - mean|
  double laminar = 0.0;
};
FlowForceReport flow_force_profile(const HeightField& f, const StratifiedBackground& bg);

struct IdentityReport {
  double lhs = 0.0, rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs|
};
// Integral identity for F evaluated on the crest column.
IdentityReport check_flow_force_identity(const HeightField& f, const StratifiedBackground& bg);

struct FroudeBoundReport {
  double rho_max = 0.0, Hp_max = 0.0, crest_hp_max = 0.0;
  double bound = 0.0;  // 2 |rho| |H_p|^2 |h_p(0, .)|
  double F2 = 0.0;
  double slack = 0.0;  // bound - F^2
  bool ok(double tol = 1e-8) const { return slack >= -tol; }
};
FroudeBoundReport check_froude_upper_bound(const HeightField& f, const StratifiedBackground& bg);

struct NodalViolation {
  int i = -1, r = -1;
  double value = 0.0;
};

struct NodalReport {
  bool trivial = false;
  bool elevation_ok = true, wq_ok = true, wqq_ok = true, wqp_ok = true, wqqp_ok = true;
  bool symmetry_ok = true;
  double band = 0.0;
  double wqqp_value = 0.0;
  // worst offender per check (i = -1 if none)
  NodalViolation elevation, wq, wqq, wqp, wqqp, symmetry;
  bool all_ok() const {
    return !trivial && elevation_ok && wq_ok && wqq_ok && wqp_ok && wqqp_ok && symmetry_ok;
  }
};
// Sign checks on a half-grid field. A value counts as violating only when it is on the
// wrong side of zero by more than band = band_factor * h^2 * |w|_inf.
NodalReport check_nodal(const HeightField& f, double band_factor = 10.0);

struct VelocityReport {
  double stagnation_metric = 0.0;  // min 1/(sqrt(rho) h_p) = inf (c - u)
  double sup_sqrt_rho_hp = 0.0;
  double velocity_sup = 0.0;       // max (1 + h_q^2)/(rho h_p^2)
  int stag_i = -1, stag_r = -1;
};
VelocityReport stagnation_and_velocity(const HeightField& f, const StratifiedBackground& bg);

struct TrivialityReport {
  double F = 0.0;
  double seed_inf = 0.0;
  bool converged = false;
  int iterations = 0;
  double w_inf = 0.0;
  std::string message;
};
// Newton at Froude number F from the ansatz at amplitude parameter eps_seed (the seed
// profile is the reduced-model ansatz; its F is overridden).
TrivialityReport check_critical_triviality(const StratifiedBackground& bg,
                                           const ReducedModel& model, const SlitGrid& grid,
                                           double F, double eps_seed);

struct WaveDiagnostics {
  double F = 0.0, epsilon = 0.0;
  double amplitude = 0.0;
  double min_hp = 0.0, max_hp = 0.0;
  FlowForceReport flow_force;
  IdentityReport identity;
  FroudeBoundReport froude;
  NodalReport nodal;
  VelocityReport velocity;
  double blowup = 0.0;  // N(s); 0 when F_cr is unknown
};
WaveDiagnostics diagnose(const HeightField& f, const StratifiedBackground& bg, double F_cr = 0.0);

// Human-readable report followed by a key = value block.
std::string format_report(const WaveDiagnostics& d);

// N = |w|_{C1} + 1/min h_p + F + 1/(F - F_cr)
double blowup_functional(const HeightField& f, const StratifiedBackground& bg, double F_cr);

}  // namespace stratwave
