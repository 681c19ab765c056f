#pragma once

#include <memory>
#include <string>

#include "stratwave/interpolation.hpp"
#include "stratwave/profile.hpp"

namespace stratwave {

struct FluidParameters {
  double c = 1.0;        // wave speed
  double g = 1.0;        // gravity
  double d_plus = 0.5;   // upper layer thickness
  double d_minus = 0.5;  // lower layer thickness

  double d() const { return d_plus + d_minus; }
  void validate() const;
};

// Everything needed to map dimensionless results back to physical units.
struct ScaleReport {
  double d = 1.0;
  double g = 1.0;
  double rho0 = 1.0;             // surface density
  double c = 1.0;                // dimensional wave speed
  double sqrt_gd = 1.0;
  double ustar_factor = 1.0;     // rescaling applied to u* to meet the normalization
  double flux_integral = 1.0;    // int sqrt(rho) u* dy of the supplied profiles
  double m_over_F = 1.0;         // sqrt(g rho0 d^3); mass flux is m = F * m_over_F
  double F_relation_constant = 1.0;  // g rho0 d^3 / (m/F)^2 after normalization
  double P_atm = 0.0;
};

// Dimensionless far-field profiles on y in [-1, 0]; breakpoint at -d_plus/d.
struct ScaledProfiles {
  FluidParameters params;  // g = d = 1, c scaled by sqrt(gd)
  PiecewiseProfile density;
  PiecewiseProfile ustar;  // c - u in the far field
  ScaleReport scale;
};

struct NondimOptions {
  bool auto_rescale = true;  // rescale u* to satisfy the flux normalization
  int validation_samples = 257;
};

ScaledProfiles nondimensionalize(const FluidParameters& params, const PiecewiseProfile& density,
                                 const PiecewiseProfile& ustar, const NondimOptions& opt = {});

// Streamline value of the internal interface: -int_{y_hat}^0 sqrt(rho) u* dy.
double interface_streamline(const ScaledProfiles& s);

struct HeightOptions {
  double tol = 1e-10;
  int intervals = 1024;  // table nodes per layer
  double anchor_tol = 1e-6;
};

// Asymptotic height H(p) from H_p = 1/(sqrt(rho) u*)(H - 1), H(-1) = 0.
LayeredFunction solve_asymptotic_height(const ScaledProfiles& s, double p_hat,
                                        const HeightOptions& opt = {});

struct BetaProfiles {
  PiecewiseProfile a;  // F-independent part
  PiecewiseProfile b;  // coefficient of 1/F^2
};

class StratifiedBackground {
 public:
  StratifiedBackground() = default;
  explicit StratifiedBackground(ScaledProfiles s, const HeightOptions& opt = {});

  double p_hat() const;
  const ScaledProfiles& scaled() const;
  const ScaleReport& scale() const;
  const LayeredFunction& H_table() const;

  double H(double p, Layer l) const;
  double H_p(double p, Layer l) const;
  double H_pp(double p, Layer l) const;
  double rho(double p, Layer l) const;
  double rho_p(double p, Layer l) const;
  double rho_jump() const;  // rho(p_hat+) - rho(p_hat-)
  double ustar(double p, Layer l) const;    // c - U along streamline p
  double ustar_p(double p, Layer l) const;  // d/dp of the above
  double y_far(double p, Layer l) const { return H(p, l) - 1.0; }

  double beta_a(double p, Layer l) const;
  double beta_b(double p, Layer l) const;
  double beta(double p, Layer l, double F) const {
    return beta_a(p, l) + beta_b(p, l) / (F * F);
  }
  // int_p^0 rho H_p dp' = int_{H(p)-1}^0 rho(y) dy
  double pi(double p, Layer l) const;
  // Bernoulli energy of streamline p in the far field
  double bernoulli_energy(double p, Layer l, double F) const;

  double rho_max() const;
  double H_p_max() const;
  double F_relation_constant() const;

  Layer layer_of(double p) const { return p < p_hat() ? Layer::lower : Layer::upper; }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

BetaProfiles compute_beta(const StratifiedBackground& bg);

// nondimensionalize + interface_streamline + solve_asymptotic_height + compute_beta
StratifiedBackground make_background(const FluidParameters& params,
                                     const PiecewiseProfile& density,
                                     const PiecewiseProfile& ustar,
                                     const HeightOptions& opt = {});

// Two-column report: p, H, H_p, rho, beta_a, beta_b.
std::string background_report(const StratifiedBackground& bg, int rows_per_layer = 65);

}  // namespace stratwave
