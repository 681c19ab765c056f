#include "stratwave/eulerian.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "stratwave/error.hpp"
#include "stratwave/height_solver.hpp"

namespace stratwave {

EulerianWave dj_inverse(const HeightField& f, const StratifiedBackground& bg) {
  const SlitGrid& g = f.grid;
  const NodalDerivatives d = nodal_derivatives(f, bg);
  EulerianWave e;
  e.grid = g;
  e.F = f.F;
  e.x.resize(g.nq());
  e.p.resize(g.rows());
  e.rho.resize(g.rows());
  e.E.resize(g.rows());
  e.y.resize(g.nodes());
  e.u_rel.resize(g.nodes());
  e.v.resize(g.nodes());
  for (int i = 0; i < g.nq(); ++i) e.x[i] = g.q(i);
  for (int r = 0; r < g.rows(); ++r) {
    const Layer l = g.layer(r);
    e.p[r] = g.p(r);
    e.rho[r] = bg.rho(e.p[r], l);
    e.E[r] = bg.bernoulli_energy(e.p[r], l, f.F);
    const double H = bg.H(e.p[r], l);
    const double sr = std::sqrt(e.rho[r]);
    for (int i = 0; i < g.nq(); ++i) {
      const std::size_t k = g.index(i, r);
      const double hp = d.hp[k];
      if (!(hp > 0.0)) throw NumericalError("dj_inverse: h_p <= 0 (stagnation) at column " +
                                            std::to_string(i) + ", row " + std::to_string(r));
      e.y[k] = H + f.w[k] - 1.0;
      e.u_rel[k] = -1.0 / (sr * hp);
      e.v[k] = -d.hq[k] / (sr * hp);
    }
  }
  e.eta.resize(g.nq());
  e.zeta.resize(g.nq());
  for (int i = 0; i < g.nq(); ++i) {
    e.eta[i] = e.y[g.index(i, g.top_row())];
    e.zeta[i] = e.y[g.index(i, g.iface_lower())];
  }
  const double iF2 = 1.0 / (f.F * f.F);
  const double rt = e.rho[g.top_row()];
  e.Q_eta = 2.0 * (e.E[g.top_row()] + iF2 * rt);
  const double jr = e.rho[g.iface_upper()] - e.rho[g.iface_lower()];
  const double jE = e.E[g.iface_upper()] - e.E[g.iface_lower()];
  e.Q_zeta = 2.0 * (jE + iF2 * jr);
  return e;
}

void pressure_field(EulerianWave& e, const StratifiedBackground&) {
  const SlitGrid& g = e.grid;
  const double iF2 = 1.0 / (e.F * e.F);
  e.P.assign(g.nodes(), 0.0);
  for (int r = 0; r < g.rows(); ++r)
    for (int i = 0; i < g.nq(); ++i) {
      const std::size_t k = g.index(i, r);
      const double q2 = e.u_rel[k] * e.u_rel[k] + e.v[k] * e.v[k];
      e.P[k] = e.E[r] - 0.5 * e.rho[r] * q2 - e.rho[r] * e.y[k] * iF2;
    }
}

InterfaceChecks interface_checks(const EulerianWave& e, const StratifiedBackground& bg) {
  if (e.dimensional) throw InvalidInput("interface_checks expects a dimensionless wave");
  const SlitGrid& g = e.grid;
  EulerianWave w = e;
  if (w.P.empty()) pressure_field(w, bg);
  InterfaceChecks c;
  const int rm = g.iface_lower(), rp = g.iface_upper(), rt = g.top_row();
  const double iF2 = 1.0 / (e.F * e.F);
  for (int i = 0; i < g.nq(); ++i) {
    c.surface_pressure = std::max(c.surface_pressure, std::abs(w.P[g.index(i, rt)]));
    c.pressure_jump =
        std::max(c.pressure_jump, std::abs(w.P[g.index(i, rp)] - w.P[g.index(i, rm)]));
    auto grad2 = [&](int r) {
      const std::size_t k = g.index(i, r);
      return e.rho[r] * (e.u_rel[k] * e.u_rel[k] + e.v[k] * e.v[k]);
    };
    const double lhs = 0.5 * (grad2(rp) - grad2(rm));
    const double jr = e.rho[rp] - e.rho[rm];
    // continuity of P = E - rho q^2/2 - rho y/F^2
    const double rhs = (e.E[rp] - e.E[rm]) - jr * e.y[g.index(i, rm)] * iF2;
    c.bernoulli_jump = std::max(c.bernoulli_jump, std::abs(lhs - rhs));
  }
  // psi = 0 on the surface and psi_y = sqrt(rho) (u - c): psi on the interface is
  // int sqrt(rho) (c - u) dy over the upper layer of the crest column
  const int ic = g.symmetric() ? 0 : (g.nq() - 1) / 2;
  double psi = 0.0;
  for (int r = rp; r < rt; ++r) {
    const double a0 = -std::sqrt(e.rho[r]) * e.u_rel[g.index(ic, r)];
    const double a1 = -std::sqrt(e.rho[r + 1]) * e.u_rel[g.index(ic, r + 1)];
    psi += 0.5 * (a0 + a1) * (e.y[g.index(ic, r + 1)] - e.y[g.index(ic, r)]);
  }
  c.streamline_value = psi;
  return c;
}

EulerianWave redimensionalize(const EulerianWave& e, const ScaleReport& s) {
  if (e.dimensional) throw InvalidInput("redimensionalize: wave is already dimensional");
  EulerianWave d = e;
  const double L = s.d;
  const double V = e.F * s.sqrt_gd;
  const double Pscale = e.F * e.F * s.g * s.rho0 * s.d;
  for (double& v : d.x) v *= L;
  for (double& v : d.eta) v *= L;
  for (double& v : d.zeta) v *= L;
  for (double& v : d.y) v *= L;
  for (double& v : d.u_rel) v *= V;
  for (double& v : d.v) v *= V;
  for (double& v : d.rho) v *= s.rho0;
  for (double& v : d.E) v *= Pscale;
  for (double& v : d.P) v = v * Pscale + s.P_atm;
  d.Q_eta *= Pscale;
  d.Q_zeta *= Pscale;
  d.dimensional = true;
  return d;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw InvalidInput("cannot write " + path);
  os << std::setprecision(17);
  return os;
}

}  // namespace

void write_interfaces_csv(const EulerianWave& e, const std::string& path) {
  std::ofstream os = open_out(path);
  os << "x,eta,zeta\n";
  for (std::size_t i = 0; i < e.x.size(); ++i)
    os << e.x[i] << ',' << e.eta[i] << ',' << e.zeta[i] << '\n';
}

void write_streamlines_csv(const EulerianWave& e, const std::string& path) {
  std::ofstream os = open_out(path);
  const SlitGrid& g = e.grid;
  os << "x,p,y,u_minus_c,v,P\n";
  for (int i = 0; i < g.nq(); ++i)
    for (int r = 0; r < g.rows(); ++r) {
      const std::size_t k = g.index(i, r);
      os << e.x[i] << ',' << e.p[r] << ',' << e.y[k] << ',' << e.u_rel[k] << ',' << e.v[k]
         << ',' << (e.P.empty() ? 0.0 : e.P[k]) << '\n';
    }
}

}  // namespace stratwave
