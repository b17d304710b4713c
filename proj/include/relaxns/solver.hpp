#pragma once

// Finite-volume solver for the relaxed system on a uniform grid with
// background ghost cells. Evolved variables are (rho, rho u, E, rho q, rho S);
// a step is Strang-split as half relaxation, full transport, half relaxation.
// Transport uses the Rusanov flux, first order or MUSCL-minmod with Heun
// time stepping. The relaxation half-steps integrate the linear stiff
// sources exactly with frozen gradients and leave E untouched.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relaxns/errors.hpp"
#include "relaxns/field.hpp"
#include "relaxns/functionals.hpp"
#include "relaxns/hyperbolic.hpp"
#include "relaxns/initdata.hpp"
#include "relaxns/model.hpp"

namespace relaxns {

struct TimeControls {
  double cfl = 0.45;
  double t_end = 1.0;
  double dt_floor = 1e-12;
  int snapshot_every = 100;

  void validate() const {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("time.cfl must lie in (0, 1]");
    if (!(t_end > 0.0)) throw ConfigError("time.t_end must be positive");
    if (!(dt_floor > 0.0)) throw ConfigError("time.dt_floor must be positive");
    if (snapshot_every < 0) throw ConfigError("time.snapshot_every must be nonnegative");
  }
};

struct BreakdownCriteria {
  double grad_threshold = 1e3;
  double theta_min = 1e-6;
  double rho_min = 1e-6;
  double amplification = 10.0;

  void validate() const {
    if (!(grad_threshold > 0.0) || !(theta_min > 0.0) || !(rho_min > 0.0) || !(amplification > 0.0)) {
      throw ConfigError("breakdown criteria must all be positive");
    }
  }
};

enum class RunStatus { completed, breakdown, dt_floor_hit, domain_error };
enum class BreakdownKind { gradient, amplification, positivity, nonfinite };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::breakdown: return "breakdown";
    case RunStatus::dt_floor_hit: return "dt_floor_hit";
    case RunStatus::domain_error: return "domain_error";
  }
  return "?";
}

inline const char* to_string(BreakdownKind k) {
  switch (k) {
    case BreakdownKind::gradient: return "gradient";
    case BreakdownKind::amplification: return "amplification";
    case BreakdownKind::positivity: return "positivity";
    case BreakdownKind::nonfinite: return "nonfinite";
  }
  return "?";
}

struct BreakdownEvent {
  double t = 0.0;
  double x = 0.0;
  BreakdownKind kind = BreakdownKind::gradient;
  double value = 0.0;
};

struct Snapshot {
  double t = 0.0;
  Field field;
};

struct SimulationConfig {
  GasParams gas;
  Grid grid;
  TimeControls time;
  BreakdownCriteria breakdown;
  InitSpec init;
  int order = 1;
  /// Support detection level, relative to the initial max deviation from
  /// background (absolute when the initial field is background).
  double support_tol = 1e-2;

  double absolute_support_tol(double initial_deviation) const {
    return support_tol * (initial_deviation > 0.0 ? initial_deviation : 1.0);
  }

  void validate() const {
    gas.validate();
    grid.validate();
    time.validate();
    breakdown.validate();
    init.validate();
    if (order != 1 && order != 2) throw ConfigError("run.order must be 1 or 2");
    if (!(support_tol >= 0.0)) throw ConfigError("run.support_tol must be nonnegative");
  }
};

struct RunResult {
  RunStatus status = RunStatus::completed;
  double t_final = 0.0;
  std::optional<BreakdownEvent> breakdown;
  FunctionalSeries series;
  std::vector<Snapshot> snapshots;
  std::vector<std::string> warnings;
  AdmissibilityReport init_report;
  InitialBudget budget;
  Field initial_field;
  Field final_field;
  long steps = 0;
  std::string error;
};

// ---------------------------------------------------------------------------
// Fluxes

using Flux = std::array<double, 5>;

/// f(U) = (rho u, rho u^2 + p - S, u E + p u + q - S u, rho u q, rho u S).
inline Flux physical_flux(const PrimitiveState& s, const GasParams& p) {
  const double E = total_energy(p, s);
  const double pr = pressure(p, s.rho, s.theta);
  const double m = s.rho * s.u;
  return {m, m * s.u + pr - s.S, s.u * (E + pr - s.S) + s.q, m * s.q, m * s.S};
}

inline std::array<double, 5> as_array(const ConservedState& c) { return {c.rho, c.mom, c.Etot, c.w, c.z}; }

/// Rusanov flux with the wave-speed bound supplied by the caller.
inline Flux rusanov_flux(const PrimitiveState& L, const PrimitiveState& R, double lambda,
                         const GasParams& p) {
  const Flux fL = physical_flux(L, p), fR = physical_flux(R, p);
  const auto uL = as_array(prim_to_cons(p, L)), uR = as_array(prim_to_cons(p, R));
  Flux out;
  for (int k = 0; k < 5; ++k) out[k] = 0.5 * (fL[k] + fR[k]) - 0.5 * lambda * (uR[k] - uL[k]);
  return out;
}

/// Rusanov flux with lambda = max characteristic-speed magnitude of L and R.
inline Flux hyperbolic_flux(const ConservedState& left, const ConservedState& right, const GasParams& p) {
  const PrimitiveState L = cons_to_prim(p, left), R = cons_to_prim(p, right);
  return rusanov_flux(L, R, std::max(max_abs_speed(L, p), max_abs_speed(R, p)), p);
}

inline double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

inline PrimitiveState minmod_slope(const PrimitiveState& l, const PrimitiveState& c, const PrimitiveState& r) {
  return {minmod(c.rho - l.rho, r.rho - c.rho), minmod(c.u - l.u, r.u - c.u),
          minmod(c.theta - l.theta, r.theta - c.theta), minmod(c.q - l.q, r.q - c.q),
          minmod(c.S - l.S, r.S - c.S)};
}

inline PrimitiveState axpy(const PrimitiveState& s, double h, const PrimitiveState& d) {
  return {s.rho + h * d.rho, s.u + h * d.u, s.theta + h * d.theta, s.q + h * d.q, s.S + h * d.S};
}

/// Face states at the N+1 interfaces of the grid from a ghost-extended
/// field: piecewise constant (order 1) or minmod-limited linear (order 2).
inline void reconstruct_faces(std::span<const PrimitiveState> ext, int order, std::vector<PrimitiveState>& left,
                              std::vector<PrimitiveState>& right) {
  const std::size_t faces = ext.size() - 2 * kGhosts + 1;
  left.resize(faces);
  right.resize(faces);
  for (std::size_t f = 0; f < faces; ++f) {
    const std::size_t il = f + kGhosts - 1, ir = f + kGhosts;
    if (order == 1) {
      left[f] = ext[il];
      right[f] = ext[ir];
    } else {
      left[f] = axpy(ext[il], 0.5, minmod_slope(ext[il - 1], ext[il], ext[il + 1]));
      right[f] = axpy(ext[ir], -0.5, minmod_slope(ext[ir - 1], ext[ir], ext[ir + 1]));
    }
  }
}

/// Conservative update c_i -= dt/dx (F_{i+1/2} - F_{i-1/2}); faces[k] is the
/// flux through the left face of cell k.
inline void apply_flux_divergence(ConservedField& c, std::span<const Flux> faces, double dt, double dx) {
  const double r = dt / dx;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Flux& a = faces[i];
    const Flux& b = faces[i + 1];
    c[i].rho -= r * (b[0] - a[0]);
    c[i].mom -= r * (b[1] - a[1]);
    c[i].Etot -= r * (b[2] - a[2]);
    c[i].w -= r * (b[3] - a[3]);
    c[i].z -= r * (b[4] - a[4]);
  }
}

inline ConservedField axpby(double a, const ConservedField& x, double b, const ConservedField& y) {
  ConservedField out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = {a * x[i].rho + b * y[i].rho, a * x[i].mom + b * y[i].mom, a * x[i].Etot + b * y[i].Etot,
              a * x[i].w + b * y[i].w, a * x[i].z + b * y[i].z};
  }
  return out;
}

/// One transport step shared by all closures. Physics supplies
/// primitive(cons) and face_fluxes(prims, order) -> N+1 fluxes. Order 2
/// uses Heun's method (SSP-RK2).
template <class Physics>
ConservedField transport(const Physics& phys, const ConservedField& c, const Field& prims, double dt,
                         double dx, int order) {
  ConservedField stage = c;
  apply_flux_divergence(stage, phys.face_fluxes(prims, order), dt, dx);
  if (order == 1) return stage;
  const Field mid = phys.primitive(stage);
  ConservedField second = stage;
  apply_flux_divergence(second, phys.face_fluxes(mid, order), dt, dx);
  return axpby(0.5, c, 0.5, second);
}

// ---------------------------------------------------------------------------
// Relaxed closure

/// Exact integration over h of the heat-flux and stress relaxation with
/// theta_x and u_x frozen at their central differences. E is unchanged, so
/// the energy moved in or out of q and S is absorbed by theta.
inline ConservedField relaxation_substep(const ConservedField& c, const Field& prims, double h,
                                         const GasParams& p, double dx) {
  const auto gu = grad_u(prims, dx);
  const auto gt = grad_theta(prims, dx);
  ConservedField out = c;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const PrimitiveState& s = prims[i];
    const double q_eq = -p.kappa0 * gt[i];
    const double S_eq = p.mu * gu[i];
    const double q = q_eq + (s.q - q_eq) * std::exp(-h / (tau1(p, s.theta) * s.rho));
    const double S = S_eq + (s.S - S_eq) * std::exp(-h / (p.tau2 * s.rho));
    out[i].w = s.rho * q;
    out[i].z = s.rho * S;
  }
  return out;
}

struct RelaxedPhysics {
  GasParams gas;
  double dx = 1.0;

  Field primitive(const ConservedField& c) const { return to_primitive(gas, c); }
  ConservedField conserved(const Field& f) const { return to_conserved(gas, f); }

  std::vector<Flux> face_fluxes(const Field& prims, int order) const {
    const Field ext = fill_ghosts(prims);
    std::vector<PrimitiveState> L, R;
    reconstruct_faces(ext, order, L, R);
    std::vector<Flux> out(L.size());
    if (order == 1) {
      std::vector<double> speed(ext.size());
      for (std::size_t i = 0; i < ext.size(); ++i) speed[i] = max_abs_speed(ext[i], gas);
      for (std::size_t f = 0; f < L.size(); ++f) {
        out[f] = rusanov_flux(L[f], R[f], std::max(speed[f + kGhosts - 1], speed[f + kGhosts]), gas);
      }
    } else {
      for (std::size_t f = 0; f < L.size(); ++f) {
        out[f] = rusanov_flux(L[f], R[f], std::max(max_abs_speed(L[f], gas), max_abs_speed(R[f], gas)), gas);
      }
    }
    return out;
  }

  double max_speed(const Field& prims) const { return relaxns::max_speed(prims, gas); }

  /// No restriction beyond the CFL condition.
  double extra_dt_cap(const Field&) const { return std::numeric_limits<double>::infinity(); }

  ConservedField step(const ConservedField& c, const Field& prims, double dt, int order) const {
    ConservedField a = relaxation_substep(c, prims, 0.5 * dt, gas, dx);
    Field pa = primitive(a);
    ConservedField b = transport(*this, a, pa, dt, dx, order);
    Field pb = primitive(b);
    return relaxation_substep(b, pb, 0.5 * dt, gas, dx);
  }

  /// Parameters for the diagnostics.
  const GasParams& diagnostic_params() const { return gas; }
};

/// One full Strang step of the relaxed scheme.
inline Field step(const Field& field, double dt, const GasParams& p, double dx, int order = 1) {
  RelaxedPhysics phys{p, dx};
  return phys.primitive(phys.step(phys.conserved(field), field, dt, order));
}

// ---------------------------------------------------------------------------
// Time step and breakdown

/// dt = cfl dx / max(lambda_max, 1e-12), capped by extra_cap and t_end - t.
inline double compute_dt(double lambda_max, double dx, double t, const TimeControls& tc,
                         double extra_cap = std::numeric_limits<double>::infinity()) {
  const double dt = std::min(tc.cfl * dx / std::max(lambda_max, 1e-12), extra_cap);
  return std::min(dt, tc.t_end - t);
}

/// max(max |u_x|, max |theta_x|) with the location of the maximum.
inline std::pair<double, double> max_gradient(std::span<const PrimitiveState> f, const Grid& g) {
  const auto gu = grad_u(f, g.dx());
  const auto gt = grad_theta(f, g.dx());
  double best = 0.0, where = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = std::max(std::abs(gu[i]), std::abs(gt[i]));
    if (v > best) {
      best = v;
      where = g.x(static_cast<int>(i));
    }
  }
  return {best, where};
}

inline std::optional<BreakdownEvent> detect_breakdown(std::span<const PrimitiveState> f, const Grid& g,
                                                      const BreakdownCriteria& crit, double initial_max_grad,
                                                      double t) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto& s = f[i];
    const double x = g.x(static_cast<int>(i));
    if (!std::isfinite(s.rho) || !std::isfinite(s.u) || !std::isfinite(s.theta) || !std::isfinite(s.q) ||
        !std::isfinite(s.S)) {
      return BreakdownEvent{t, x, BreakdownKind::nonfinite, std::nan("")};
    }
    if (s.rho < crit.rho_min) return BreakdownEvent{t, x, BreakdownKind::positivity, s.rho};
    if (s.theta < crit.theta_min) return BreakdownEvent{t, x, BreakdownKind::positivity, s.theta};
  }
  const auto [grad, where] = max_gradient(f, g);
  if (grad > crit.grad_threshold) return BreakdownEvent{t, where, BreakdownKind::gradient, grad};
  if (initial_max_grad > 0.0 && grad > crit.amplification * initial_max_grad) {
    return BreakdownEvent{t, where, BreakdownKind::amplification, grad};
  }
  return std::nullopt;
}

inline bool all_finite(const ConservedField& c) {
  return std::all_of(c.begin(), c.end(), [](const ConservedState& s) {
    return std::isfinite(s.rho) && std::isfinite(s.mom) && std::isfinite(s.Etot) && std::isfinite(s.w) &&
           std::isfinite(s.z);
  });
}

// ---------------------------------------------------------------------------
// Driver

/// Time loop shared by the relaxed and classical closures: samples the
/// functionals after every step, keeps snapshots every snapshot_every
/// steps, and stops at t_end or at the first breakdown event.
template <class Physics>
RunResult run_with(const Physics& phys, const SimulationConfig& cfg) {
  RunResult res;
  const Grid& g = cfg.grid;
  const GasParams& dp = phys.diagnostic_params();

  InitialField init = build_initial_field(cfg.init, g, dp);
  res.init_report = init.report;
  res.initial_field = init.field;
  res.budget = initial_budget(init.field, g, dp);
  if (!init.report.support_inside_domain) {
    res.warnings.push_back("initial support extends to the domain boundary");
  }
  const double reach = init.report.M + cfg.gas.sigma * cfg.time.t_end;
  if (!g.contains(reach)) {
    res.warnings.push_back("domain does not contain [-M - sigma t_end, M + sigma t_end]");
  }

  ConservedField cons = phys.conserved(init.field);
  Field prims = phys.primitive(cons);
  double lambda = phys.max_speed(prims);
  double t = 0.0;
  const double support_tol = cfg.absolute_support_tol(perturbation_sup(init.field));
  res.series.push_back(sample_functionals(prims, cons, g, dp, res.budget, t, 0.0, lambda, support_tol, nullptr));
  res.snapshots.push_back({t, prims});
  const double initial_max_grad = max_gradient(prims, g).first;
  bool boundary_warned = false;

  auto finish = [&](RunStatus st) {
    res.status = st;
    res.t_final = t;
    res.final_field = prims;
    if (cfg.time.snapshot_every > 0 && (res.snapshots.empty() || res.snapshots.back().t != t)) {
      res.snapshots.push_back({t, prims});
    }
    return res;
  };

  while (t < cfg.time.t_end) {
    const double dt = compute_dt(lambda, g.dx(), t, cfg.time, phys.extra_dt_cap(prims));
    const bool end_capped = dt == cfg.time.t_end - t;
    if (dt < cfg.time.dt_floor && !end_capped) {
      res.error = "time step " + std::to_string(dt) + " below floor";
      return finish(RunStatus::dt_floor_hit);
    }
    ConservedField next;
    try {
      next = phys.step(cons, prims, dt, cfg.order);
      prims = phys.primitive(next);
    } catch (const DomainError& e) {
      const bool finite = all_finite(next) || next.empty();
      res.breakdown = BreakdownEvent{t + dt, 0.0, finite ? BreakdownKind::positivity : BreakdownKind::nonfinite,
                                     std::nan("")};
      res.error = e.what();
      t += dt;
      ++res.steps;
      return finish(RunStatus::breakdown);
    }
    cons = std::move(next);
    t = end_capped ? cfg.time.t_end : t + dt;
    ++res.steps;

    if (auto ev = detect_breakdown(prims, g, cfg.breakdown, initial_max_grad, t)) {
      res.breakdown = ev;
      if (ev->kind == BreakdownKind::nonfinite) return finish(RunStatus::breakdown);
    }
    lambda = phys.max_speed(prims);
    res.series.push_back(
        sample_functionals(prims, cons, g, dp, res.budget, t, dt, lambda, support_tol, &res.series.back()));
    if (!boundary_warned && touches_boundary(prims, support_tol)) {
      res.warnings.push_back("perturbation reached the boundary at t=" + std::to_string(t));
      boundary_warned = true;
    }
    if (cfg.time.snapshot_every > 0 && res.steps % cfg.time.snapshot_every == 0) res.snapshots.push_back({t, prims});
    if (res.breakdown) return finish(RunStatus::breakdown);
  }
  return finish(RunStatus::completed);
}

inline RunResult run(const SimulationConfig& cfg) {
  cfg.validate();
  return run_with(RelaxedPhysics{cfg.gas, cfg.grid.dx()}, cfg);
}

}  // namespace relaxns
