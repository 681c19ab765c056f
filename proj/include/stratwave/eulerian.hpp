#pragma once

#include <string>
#include <vector>

#include "stratwave/background.hpp"
#include "stratwave/grid.hpp"

namespace stratwave {

// Physical fields sampled on streamline nodes (x_i, p_r), indexed like HeightField::w.
struct EulerianWave {
  SlitGrid grid;
  std::vector<double> x;      // per column
  std::vector<double> p;      // per row
  std::vector<double> eta;    // free surface, per column
  std::vector<double> zeta;   // internal interface, per column
  std::vector<double> y;      // streamline elevation
  std::vector<double> u_rel;  // u - c
  std::vector<double> v;
  std::vector<double> rho;    // per row
  std::vector<double> E;      // Bernoulli energy per row
  std::vector<double> P;      // pressure; empty until pressure_field
  double F = 0.0;
  double Q_eta = 0.0, Q_zeta = 0.0;
  bool dimensional = false;

  double& at(std::vector<double>& a, int i, int r) const { return a[grid.index(i, r)]; }
  double at(const std::vector<double>& a, int i, int r) const { return a[grid.index(i, r)]; }
};

EulerianWave dj_inverse(const HeightField& f, const StratifiedBackground& bg);

// P = E - rho ((u-c)^2 + v^2)/2 - rho y / F^2 on every node.
void pressure_field(EulerianWave& wave, const StratifiedBackground& bg);

struct InterfaceChecks {
  double surface_pressure = 0.0;   // max |P| on the top row
  double pressure_jump = 0.0;      // max |P+ - P-| on the interface
  double bernoulli_jump = 0.0;     // max |(|grad psi+|^2 - |grad psi-|^2)/2 - ([E] - [rho] y/F^2)|
  double streamline_value = 0.0;   // psi on the interface from the far-field profile, should be -p_hat
};
InterfaceChecks interface_checks(const EulerianWave& wave, const StratifiedBackground& bg);

EulerianWave redimensionalize(const EulerianWave& wave, const ScaleReport& scale);

void write_interfaces_csv(const EulerianWave& wave, const std::string& path);
// x, p, y, u, v, P rows
void write_streamlines_csv(const EulerianWave& wave, const std::string& path);

}  // namespace stratwave
