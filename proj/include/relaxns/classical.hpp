#pragma once

// Classical compressible Navier-Stokes-Fourier reference (tau1 = tau2 = 0):
// S = mu u_x and q = -kappa theta_x enter the fluxes directly. It shares the
// transport kernel and driver with the relaxed solver.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "relaxns/solver.hpp"

namespace relaxns {

struct ClassicalPhysics {
  GasParams gas;
  double dx = 1.0;

  /// Diagnostics see no relaxation energy: tau2 = 0 and Z = 0.
  GasParams diag;

  ClassicalPhysics(const GasParams& g, double h) : gas(g), dx(h) {
    diag = gas;
    diag.tau2 = 0.0;
    diag.Zk = 0.0;
  }

  /// Cell values with q and S set to their Fourier and Newton values.
  Field primitive(const ConservedField& c) const {
    Field f(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto& s = c[i];
      detail::require_positive_rho(s.rho);
      const double u = s.mom / s.rho;
      const double rho_e = s.Etot - 0.5 * s.rho * u * u;
      if (!(rho_e > 0.0) || !std::isfinite(rho_e)) throw DomainError("nonpositive internal energy");
      f[i] = {s.rho, u, rho_e / (s.rho * gas.Cv), 0.0, 0.0};
    }
    const auto gu = grad_u(f, dx);
    const auto gt = grad_theta(f, dx);
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i].q = -gas.kappa0 * gt[i];
      f[i].S = gas.mu * gu[i];
    }
    return f;
  }

  ConservedField conserved(const Field& f) const {
    ConservedField c(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto& s = f[i];
      c[i] = {s.rho, s.rho * s.u, 0.5 * s.rho * s.u * s.u + s.rho * gas.Cv * s.theta, 0.0, 0.0};
    }
    return c;
  }

  double sound_speed(const PrimitiveState& s) const { return std::sqrt(gas.gamma() * gas.R * s.theta); }

  double max_speed(const Field& prims) const {
    double m = 0.0;
    for (const auto& s : prims) m = std::max(m, std::abs(s.u) + sound_speed(s));
    return m;
  }

  /// Explicit diffusion limit 0.4 dx^2 rho_min min(1/mu, Cv/kappa).
  double extra_dt_cap(const Field& prims) const {
    return 0.4 * dx * dx * min_rho(prims) * std::min(1.0 / gas.mu, gas.Cv / gas.kappa0);
  }

  std::vector<Flux> face_fluxes(const Field& prims, int order) const {
    const Field ext = fill_ghosts(prims);
    std::vector<PrimitiveState> L, R;
    reconstruct_faces(ext, order, L, R);
    std::vector<Flux> out(L.size());
    auto euler = [&](const PrimitiveState& s) {
      const double pr = gas.R * s.rho * s.theta;
      const double E = 0.5 * s.rho * s.u * s.u + s.rho * gas.Cv * s.theta;
      return std::array<double, 3>{s.rho * s.u, s.rho * s.u * s.u + pr, s.u * (E + pr)};
    };
    auto state = [&](const PrimitiveState& s) {
      return std::array<double, 3>{s.rho, s.rho * s.u, 0.5 * s.rho * s.u * s.u + s.rho * gas.Cv * s.theta};
    };
    for (std::size_t f = 0; f < L.size(); ++f) {
      const double lam = std::max(std::abs(L[f].u) + sound_speed(L[f]), std::abs(R[f].u) + sound_speed(R[f]));
      const auto fL = euler(L[f]), fR = euler(R[f]), uL = state(L[f]), uR = state(R[f]);
      const PrimitiveState& cl = ext[f + kGhosts - 1];
      const PrimitiveState& cr = ext[f + kGhosts];
      const double S = gas.mu * (cr.u - cl.u) / dx;
      const double q = -gas.kappa0 * (cr.theta - cl.theta) / dx;
      const double uf = 0.5 * (cl.u + cr.u);
      Flux& F = out[f];
      for (int k = 0; k < 3; ++k) F[k] = 0.5 * (fL[k] + fR[k]) - 0.5 * lam * (uR[k] - uL[k]);
      F[1] -= S;
      F[2] += q - S * uf;
      F[3] = 0.0;
      F[4] = 0.0;
    }
    return out;
  }

  ConservedField step(const ConservedField& c, const Field& prims, double dt, int order) const {
    return transport(*this, c, prims, dt, dx, order);
  }

  const GasParams& diagnostic_params() const { return diag; }
};

inline RunResult run_classical(const SimulationConfig& cfg) {
  cfg.validate();
  return run_with(ClassicalPhysics{cfg.gas, cfg.grid.dx()}, cfg);
}

/// Sum of the L1 distances in rho, u and theta.
inline double l1_gap(const Field& a, const Field& b, double dx) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += std::abs(a[i].rho - b[i].rho) + std::abs(a[i].u - b[i].u) + std::abs(a[i].theta - b[i].theta);
  }
  return s * dx;
}

struct LimitRow {
  double tau = 0.0;
  double gap = 0.0;
  double order = std::numeric_limits<double>::quiet_NaN();  // against the previous row
  RunStatus status = RunStatus::completed;
};

struct LimitStudy {
  std::vector<LimitRow> rows;
  RunStatus classical_status = RunStatus::completed;
  double fitted_order = std::numeric_limits<double>::quiet_NaN();  // least squares in log-log
};

/// Relaxed runs with tau2 = tau and Zk scaled by tau / tau2 of the base
/// config, each compared at t_end with the classical run on the same grid.
inline LimitStudy relaxation_limit_study(const SimulationConfig& base, const std::vector<double>& taus) {
  base.validate();
  LimitStudy out;
  const RunResult classical = run_classical(base);
  out.classical_status = classical.status;
  for (double tau : taus) {
    SimulationConfig c = base;
    c.gas.tau2 = tau;
    c.gas.Zk = base.gas.Zk * tau / base.gas.tau2;
    const RunResult r = run(c);
    LimitRow row{tau, l1_gap(r.final_field, classical.final_field, base.grid.dx())};
    row.status = r.status;
    if (!out.rows.empty()) {
      const auto& prev = out.rows.back();
      row.order = std::log(prev.gap / row.gap) / std::log(prev.tau / row.tau);
    }
    out.rows.push_back(row);
  }
  if (out.rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(out.rows.size());
    for (const auto& r : out.rows) {
      const double x = std::log(r.tau), y = std::log(r.gap);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    out.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return out;
}

}  // namespace relaxns
