#pragma once

#include <functional>
#include <vector>

#include "stratwave/background.hpp"
#include "stratwave/interpolation.hpp"

namespace stratwave {

// Transversal shooting state: phi and the co-normal flux phi_p / H_p^3.
struct ShootingState {
  double phi = 0.0;
  double flux = 0.0;
};

struct ShootOptions {
  double tol = 1e-12;
  int table_intervals = 1024;  // nodes per layer for sampled eigenfunctions
};

// Linear transversal IVP
//   (phi_p / H_p^3)_p = mu rho_p phi + nu phi / H_p + f(p)
//   [[phi_p / H_p^3]] = mu [[rho]] phi - r3   at p_hat, phi continuous
// started from (phi, flux) at p = -1.
struct TransversalIvp {
  double mu = 0.0;
  double nu = 0.0;
  std::function<double(double, Layer)> forcing;  // may be empty
  double r3 = 0.0;
  ShootingState start{0.0, 0.0};
};

struct TransversalSolution {
  LayeredFunction phi;           // value, derivative and second derivative
  ShootingState hat_minus;       // state just below p_hat
  ShootingState hat_plus;        // state just above p_hat
  ShootingState top;             // state at p = 0
};

ShootingState integrate_transversal(const StratifiedBackground& bg, const TransversalIvp& ivp,
                                    const ShootOptions& opt = {});
TransversalSolution sample_transversal(const StratifiedBackground& bg, const TransversalIvp& ivp,
                                       const ShootOptions& opt = {});

// Start (phi, phi_p) = (0, 1) at p = -1, integrate (phi_p/H_p^3)_p = mu rho_p phi + nu phi/H_p.
ShootingState shoot(const StratifiedBackground& bg, double mu, double nu,
                    const ShootOptions& opt = {});

// A(mu) = -flux(0) + mu rho(0) phi(0) at nu = 0.
double eval_A(const StratifiedBackground& bg, double mu, const ShootOptions& opt = {});

struct CriticalData {
  double mu_cr = 0.0;
  double F_cr = 0.0;
  double A_slope = 0.0;        // dA/dmu at mu_cr
  LayeredFunction phi0;        // normalized phi0(p_hat) = 1
  double psi_rescale = 1.0;    // phi0 = psi_rescale * psi with psi_p(-1) = 1
  std::vector<double> spectrum;

  LayeredFunction psi() const { return phi0.scaled(1.0 / psi_rescale); }
};

struct CriticalOptions {
  ShootOptions shoot;
  double mu_cap = 1e6;
};

CriticalData find_mu_cr(const StratifiedBackground& bg, const CriticalOptions& opt = {});

// Largest `count` eigenvalues of the transversal problem at spectral parameter mu, descending.
std::vector<double> transversal_spectrum(const StratifiedBackground& bg, double mu, int count,
                                         const ShootOptions& opt = {});
// Largest `count` Dirichlet (phi(0) = 0) eigenvalues at mu, descending.
std::vector<double> dirichlet_spectrum(const StratifiedBackground& bg, double mu, int count,
                                       const ShootOptions& opt = {});
std::vector<double> spectrum_at_criticality(const StratifiedBackground& bg,
                                            const CriticalData& critical, int count,
                                            const ShootOptions& opt = {});

// Spatial decay rate sqrt(-nu0(1/F^2)) of small disturbances at supercritical F.
double decay_rate(const StratifiedBackground& bg, double F, const ShootOptions& opt = {});

}  // namespace stratwave
