#pragma once

#include "stratwave/background.hpp"
#include "stratwave/sturm_liouville.hpp"

namespace stratwave {

class SlitGrid;
struct HeightField;

enum class Correction { K1, K2 };

struct CorrectionProfile {
  LayeredFunction K;
  double multiplier = 0.0;  // coefficient recovered from the solvability condition
};

struct ReducedModel {
  double B1 = 0.0;
  double B2 = 0.0;
  double B2_psi = 0.0;   // B2 with the eigenfunction normalized by psi_p(-1) = 1
  double denom = 0.0;    // int phi0^2 / H_p
  LayeredFunction K1, K2;
  double B1_multiplier = 0.0;
  double B2_multiplier = 0.0;
  CriticalData critical;
};

double compute_B1(const StratifiedBackground& bg, const CriticalData& critical);
double compute_B2(const StratifiedBackground& bg, const CriticalData& critical);
double normalization_integral(const StratifiedBackground& bg, const CriticalData& critical);

// Solves L'K = rhs - B phi0 / H_p with K(-1) = 0, the top and interface conditions and
// the gauge K(p_hat) = 0; B is the solvability multiplier and is returned with K.
CorrectionProfile solve_correction(const StratifiedBackground& bg, const CriticalData& critical,
                                   Correction which, const ShootOptions& opt = {});

ReducedModel build_reduced_model(const StratifiedBackground& bg, const CriticalData& critical,
                                 const ShootOptions& opt = {});

// Which branch of the sech^2 family to use. `printed` is 3 B1 eps^2 / (2 B2) sech^2(...),
// which solves v'' = B1 eps^2 v - B2 v^2. `elevation` is its negative and solves
// v'' = B1 eps^2 v + B2 v^2, the truncation of the height equation.
enum class SeedSign { printed, elevation };

struct InterfaceSeed {
  double v = 0.0;
  double dv = 0.0;
  double d2v = 0.0;
};

InterfaceSeed sech_seed(const ReducedModel& model, double epsilon, double q,
                        SeedSign sign = SeedSign::printed);

double froude_from_epsilon(double mu_cr, double epsilon);
double epsilon_from_froude(double mu_cr, double F);

HeightField elevation_ansatz(const ReducedModel& model, double epsilon, const SlitGrid& grid,
                             SeedSign sign = SeedSign::elevation);

}  // namespace stratwave
