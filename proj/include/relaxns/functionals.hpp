#pragma once

// Integral diagnostics over a field: the weighted momentum F, the energy
// excess G, entropy and its production, the energy-identity functional and
// the support of the perturbation. All integrals use the midpoint rule on
// the solver grid.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "relaxns/field.hpp"
#include "relaxns/model.hpp"

namespace relaxns {

/// Integral of rho u^2.
inline double kinetic(std::span<const PrimitiveState> f, const Grid& g) {
  double sum = 0.0;
  for (const auto& s : f) sum += s.rho * s.u * s.u;
  return sum * g.dx();
}

/// F = int rho u x dx - tau2 int rho S dx.
inline double moment_F(std::span<const PrimitiveState> f, const Grid& g, const GasParams& p) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    sum += f[i].rho * f[i].u * g.x(static_cast<int>(i)) - p.tau2 * f[i].rho * f[i].S;
  }
  return sum * g.dx();
}

/// G = int (E - Cv) dx, evaluated from primitives.
inline double energy_G(std::span<const PrimitiveState> f, const Grid& g, const GasParams& p) {
  double sum = 0.0;
  for (const auto& s : f) sum += total_energy(p, s) - p.Cv;
  return sum * g.dx();
}

/// G from stored conserved energies (exact bookkeeping of the scheme).
inline double energy_G(std::span<const ConservedState> c, const Grid& g, const GasParams& p) {
  double sum = 0.0;
  for (const auto& s : c) sum += s.Etot - p.Cv;
  return sum * g.dx();
}

inline double mass_excess(std::span<const ConservedState> c, const Grid& g) {
  double sum = 0.0;
  for (const auto& s : c) sum += s.rho - 1.0;
  return sum * g.dx();
}

inline double entropy_total(std::span<const PrimitiveState> f, const Grid& g, const GasParams& p) {
  double sum = 0.0;
  for (const auto& s : f) sum += s.rho * entropy(p, s);
  return sum * g.dx();
}

/// Pointwise entropy production q^2/(kappa theta^2) + S^2/(mu theta).
inline double dissipation_density(const PrimitiveState& s, const GasParams& p) {
  return s.q * s.q / (p.kappa0 * s.theta * s.theta) + s.S * s.S / (p.mu * s.theta);
}

inline double dissipation_rate(std::span<const PrimitiveState> f, const Grid& g, const GasParams& p) {
  double sum = 0.0;
  for (const auto& s : f) sum += dissipation_density(s, p);
  return sum * g.dx();
}

/// Integrand of the lower energy identity:
/// Cv rho (theta - ln theta - 1) + R (rho ln rho - rho + 1)
///   + rho (a + (Z/theta)'/2) q^2 + tau2 rho S^2 / (2 mu) + rho u^2 / 2.
inline double energy_identity_density(const PrimitiveState& s, const GasParams& p) {
  return p.Cv * s.rho * (s.theta - std::log(s.theta) - 1.0) +
         p.R * (s.rho * std::log(s.rho) - s.rho + 1.0) +
         s.rho * q2_energy_coeff(p, s.theta) * s.q * s.q +
         p.tau2 / (2.0 * p.mu) * s.rho * s.S * s.S + 0.5 * s.rho * s.u * s.u;
}

inline double energy_identity_integral(std::span<const PrimitiveState> f, const Grid& g,
                                       const GasParams& p) {
  double sum = 0.0;
  for (const auto& s : f) sum += energy_identity_density(s, p);
  return sum * g.dx();
}

/// I0: the energy-identity functional of the initial field.
inline double I0_functional(std::span<const PrimitiveState> init, const Grid& g, const GasParams& p) {
  return energy_identity_integral(init, g, p);
}

/// H0: as I0 without the kinetic term; the stress term carries no density
/// weight.
inline double H0_functional(std::span<const PrimitiveState> init, const Grid& g, const GasParams& p) {
  double sum = 0.0;
  for (const auto& s : init) {
    if (!(s.rho > 0.0) || !(s.theta > 0.0)) throw DomainError("H0 needs positive rho0 and theta0");
    sum += p.Cv * s.rho * (s.theta - std::log(s.theta) - 1.0) +
           p.R * (s.rho * std::log(s.rho) - s.rho + 1.0) +
           s.rho * q2_energy_coeff(p, s.theta) * s.q * s.q + p.tau2 / (2.0 * p.mu) * s.S * s.S;
  }
  return sum * g.dx();
}

/// Largest |x_i| over cells deviating from background by more than tol
/// (max-norm over the five fields); 0 if none.
inline double support_radius(std::span<const PrimitiveState> f, const Grid& g, double tol) {
  double r = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (deviation_from_background(f[i]) > tol) r = std::max(r, std::abs(g.x(static_cast<int>(i))));
  }
  return r;
}

/// True when either outermost cell deviates from background by more than
/// tol, i.e. the integrals above have lost their meaning.
inline bool touches_boundary(std::span<const PrimitiveState> f, double tol) {
  return !f.empty() && (deviation_from_background(f.front()) > tol ||
                        deviation_from_background(f.back()) > tol);
}

inline double perturbation_sup(std::span<const PrimitiveState> f) {
  double m = 0.0;
  for (const auto& s : f) m = std::max(m, deviation_from_background(s));
  return m;
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double min_theta(std::span<const PrimitiveState> f) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : f) m = std::min(m, s.theta);
  return m;
}

inline double min_rho(std::span<const PrimitiveState> f) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : f) m = std::min(m, s.rho);
  return m;
}

inline double max_rho(std::span<const PrimitiveState> f) {
  double m = 0.0;
  for (const auto& s : f) m = std::max(m, s.rho);
  return m;
}

/// int u^2 dx (no density weight).
inline double u_l2sq(std::span<const PrimitiveState> f, const Grid& g) {
  double sum = 0.0;
  for (const auto& s : f) sum += s.u * s.u;
  return sum * g.dx();
}

/// Initial-data quantities the monitored inequalities depend on.
struct InitialBudget {
  double H0 = 0.0;
  double I0 = 0.0;
  double max_rho0 = 1.0;
  double u0_l2sq = 0.0;

  /// H0 + max rho0 |u0|^2 / 2, the bound used for the q, S energies.
  double energy_bound() const { return H0 + 0.5 * max_rho0 * u0_l2sq; }
};

inline InitialBudget initial_budget(std::span<const PrimitiveState> init, const Grid& g,
                                    const GasParams& p) {
  return {H0_functional(init, g, p), I0_functional(init, g, p), max_rho(init), u_l2sq(init, g)};
}

struct SeriesRow {
  double t = 0.0;
  double F = 0.0;
  double G = 0.0;
  double kinetic = 0.0;
  double Fdot_rhs = 0.0;
  double entropy_total = 0.0;
  double dissipation_rate = 0.0;
  double dissipation_cum = 0.0;
  double support_radius = 0.0;
  double max_grad_u = 0.0;
  double min_theta = 0.0;
  double min_rho = 0.0;
  double dt = 0.0;
  // In-memory only (not part of the series CSV).
  double mass = 0.0;
  double energy_lhs = 0.0;
  double sigma_num = 0.0;
  double max_grad_theta = 0.0;
  double perturbation_sup = 0.0;
};

using FunctionalSeries = std::vector<SeriesRow>;

/// Samples every functional on one field. dissipation_cum is accumulated
/// with the trapezoidal rule from the previous row.
inline SeriesRow sample_functionals(std::span<const PrimitiveState> f, std::span<const ConservedState> c,
                                    const Grid& g, const GasParams& p, const InitialBudget& budget,
                                    double t, double dt, double sigma_num, double support_tol,
                                    const SeriesRow* previous) {
  SeriesRow r;
  r.t = t;
  r.dt = dt;
  r.F = moment_F(f, g, p);
  r.G = energy_G(c, g, p);
  r.mass = mass_excess(c, g);
  r.kinetic = kinetic(f, g);
  const double gm = p.gamma();
  r.Fdot_rhs = 0.5 * (3.0 - gm) * r.kinetic - (gm - 1.0) * budget.energy_bound();
  r.entropy_total = entropy_total(f, g, p);
  r.dissipation_rate = dissipation_rate(f, g, p);
  r.dissipation_cum =
      previous ? previous->dissipation_cum + 0.5 * (t - previous->t) * (previous->dissipation_rate + r.dissipation_rate)
               : 0.0;
  r.energy_lhs = energy_identity_integral(f, g, p);
  r.support_radius = support_radius(f, g, support_tol);
  const auto gu = grad_u(f, g.dx());
  const auto gt = grad_theta(f, g.dx());
  r.max_grad_u = max_abs(gu);
  r.max_grad_theta = max_abs(gt);
  r.min_theta = min_theta(f);
  r.min_rho = min_rho(f);
  r.sigma_num = std::max(sigma_num, previous ? previous->sigma_num : 0.0);
  r.perturbation_sup = perturbation_sup(f);
  return r;
}

/// Energy identity residual per row: lhs(t) + dissipation_cum(t) - I0.
inline std::vector<double> energy_identity_residual(const FunctionalSeries& s, double I0) {
  std::vector<double> r;
  r.reserve(s.size());
  for (const auto& row : s) r.push_back(row.energy_lhs + row.dissipation_cum - I0);
  return r;
}

/// Entropy balance residual per step: the finite-difference rate of
/// int rho eta minus the trapezoidal mean production over the step.
inline std::vector<double> entropy_balance_residual(const FunctionalSeries& s) {
  std::vector<double> r;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double h = s[i].t - s[i - 1].t;
    r.push_back((s[i].entropy_total - s[i - 1].entropy_total) / h -
                0.5 * (s[i].dissipation_rate + s[i - 1].dissipation_rate));
  }
  return r;
}

/// Time-integrated entropy residual up to row k:
/// int rho eta (t_k) - int rho eta (0) - dissipation_cum(t_k).
inline double integrated_entropy_residual(const FunctionalSeries& s, std::size_t k) {
  return s[k].entropy_total - s.front().entropy_total - s[k].dissipation_cum;
}

}  // namespace relaxns
