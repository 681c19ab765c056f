#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "stratwave/background.hpp"
#include "stratwave/banded.hpp"
#include "stratwave/error.hpp"
#include "stratwave/grid.hpp"

namespace stratwave {

enum class Exec { serial, parallel };

struct ResidualInfo {
  double min_hp = std::numeric_limits<double>::infinity();  // min of H_p + D_p w over fluxes
  int worst_i = -1;
  int worst_r = -1;
  bool elliptic() const { return min_hp > 0.0; }
};

// Discretization of the height equation on one grid. Immutable after construction.
class HeightProblem {
 public:
  HeightProblem(const StratifiedBackground& bg, const SlitGrid& grid);

  const SlitGrid& grid() const { return grid_; }
  const StratifiedBackground& background() const { return bg_; }
  std::size_t size() const { return grid_.unknowns(); }
  int bandwidth() const { return grid_.unknowns_per_column() + 1; }
  BandedMatrix make_matrix() const;

  void gather(const HeightField& f, std::span<double> x) const;
  // writes unknown nodes, zeroes bottom row and Dirichlet columns
  void scatter(std::span<const double> x, HeightField& f) const;

  ResidualInfo residual(const HeightField& f, std::span<double> out,
                        Exec exec = Exec::parallel) const;
  void jacobian(const HeightField& f, BandedMatrix& J, Exec exec = Exec::parallel) const;
  // derivative of the residual with respect to F
  void residual_dF(const HeightField& f, std::span<double> out) const;

  double hp_node(int r) const { return hp_node_[r]; }
  double hp_half(int r) const { return hp_half_[r]; }
  double rho_p_node(int r) const { return rhop_node_[r]; }

 private:
  StratifiedBackground bg_;
  SlitGrid grid_;
  std::vector<double> hp_node_, hp_half_, rhop_node_;
  double hp_top_ = 1.0, rho_top_ = 1.0;
  double hp_hat_minus_ = 1.0, hp_hat_plus_ = 1.0, rho_jump_ = 0.0;

  template <bool Jac>
  void column(int i, const HeightField& f, double mu, double* res, BandedMatrix* J,
              ResidualInfo& info) const;
};

std::vector<double> assemble_residual(const HeightField& f, const StratifiedBackground& bg,
                                      ResidualInfo* info = nullptr, Exec exec = Exec::parallel);
BandedMatrix assemble_jacobian(const HeightField& f, const StratifiedBackground& bg,
                               Exec exec = Exec::parallel);

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  int max_halvings = 12;
  double armijo = 1e-4;
  Exec exec = Exec::parallel;
};

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history;  // infinity norms, starting with the seed
  std::vector<double> step_lengths;
  double quadratic_ratio = 0.0;  // max of r_{k+1}/r_k^2 over the terminal phase
  double min_hp = 0.0;
};

class NewtonFailure : public NumericalError {
 public:
  NewtonFailure(const std::string& what, HeightField best, NewtonReport report)
      : NumericalError(what), best_(std::move(best)), report_(std::move(report)) {}
  const HeightField& best() const { return best_; }
  const NewtonReport& report() const { return report_; }

 private:
  HeightField best_;
  NewtonReport report_;
};

// Damped Newton. `rhs` (optional, unknown-sized) is subtracted from the residual.
HeightField newton_solve(const HeightProblem& problem, const HeightField& seed,
                         const NewtonOptions& opt = {}, NewtonReport* report = nullptr,
                         std::span<const double> rhs = {});
HeightField newton_solve(const HeightField& seed, const StratifiedBackground& bg,
                         const NewtonOptions& opt = {}, NewtonReport* report = nullptr);

// Nodal h_p = H_p + w_p and h_q by the solver's stencils.
struct NodalDerivatives {
  std::vector<double> hp, hq;  // indexed like HeightField::w
};
NodalDerivatives nodal_derivatives(const HeightField& f, const StratifiedBackground& bg);

struct HpExtremes {
  double min = 0.0, max = 0.0;
  double crest_min = 0.0;  // min over the crest column
};
HpExtremes hp_extremes(const HeightField& f, const StratifiedBackground& bg);

// Bicubic transfer per layer; the new grid must share p_hat and symmetry.
// A shorter or longer L is allowed: w is taken as zero beyond the old edge.
HeightField refine_and_transfer(const HeightField& f, const SlitGrid& new_grid);

// Default truncation length for a decay rate kappa.
double default_length(double kappa, double factor = 60.0, double lo = 20.0, double hi = 400.0);

double crest_amplitude(const HeightField& f);  // w(0, p_hat)

}  // namespace stratwave
