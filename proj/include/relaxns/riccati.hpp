#pragma once

// Blow-up bookkeeping for the weighted momentum F(t): the Riccati constants,
// the forcing K(t), the existence-time bound T*, the two largeness
// thresholds on the data, and a comparison ODE whose solution bounds F from
// below while the solution stays smooth.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "relaxns/errors.hpp"
#include "relaxns/functionals.hpp"
#include "relaxns/model.hpp"

namespace relaxns {

struct RiccatiData {
  double c2 = 0.0;
  double c3 = 0.0;
  double F0 = 0.0;
  double H0 = 0.0;
  double u0_l2sq = 0.0;
  double gamma = 1.4;
  double mu = 1.0;
  double tau2 = 0.1;
  double M = 4.0;
  double sigma = 2.0;
  double max_rho0 = 1.0;
  double Tstar = std::numeric_limits<double>::infinity();

  double energy_bound() const { return H0 + 0.5 * max_rho0 * u0_l2sq; }

  /// K(t) = ((3-gamma) mu tau2 / (M + sigma t)^2 + gamma - 1) (H0 + max rho0 |u0|^2 / 2).
  double K(double t) const {
    const double r = M + sigma * t;
    return ((3.0 - gamma) * mu * tau2 / (r * r) + gamma - 1.0) * energy_bound();
  }

  /// c3 / (1 + c2 t)^3.
  double growth_coeff(double t) const {
    const double s = 1.0 + c2 * t;
    return c3 / (s * s * s);
  }

  /// 4 c2 / c3: F0 above this forces a finite T*.
  double blowup_threshold() const { return 4.0 * c2 / c3; }

  /// Lower bound 4 c2 (1 + c2 t)^2 / c3 on F valid under both thresholds.
  double F_lower_bound(double t) const {
    const double s = 1.0 + c2 * t;
    return 4.0 * c2 * s * s / c3;
  }
};

/// T* = ((1 - 4 c2/(c3 F0))^{-1/2} - 1) / c2 for F0 > 4 c2/c3, else +inf.
inline double riccati_tstar(double c2, double c3, double F0) {
  const double ratio = 4.0 * c2 / (c3 * F0);
  if (!(F0 > 0.0) || !(ratio < 1.0)) return std::numeric_limits<double>::infinity();
  return (1.0 / std::sqrt(1.0 - ratio) - 1.0) / c2;
}

inline RiccatiData riccati_constants(const GasParams& p, double M, double F0, const InitialBudget& b) {
  const double gm = p.gamma();
  if (!(gm > 1.0 && gm < 3.0)) throw ConfigError("gamma must lie in (1, 3)");
  if (!(M > 0.0)) throw ConfigError("support half-width M must be positive");
  RiccatiData d;
  d.gamma = gm;
  d.mu = p.mu;
  d.tau2 = p.tau2;
  d.M = M;
  d.sigma = p.sigma;
  d.max_rho0 = b.max_rho0;
  d.H0 = b.H0;
  d.u0_l2sq = b.u0_l2sq;
  d.F0 = F0;
  d.c2 = p.sigma / M;
  d.c3 = (3.0 - gm) / (8.0 * b.max_rho0 * M * M * M);
  d.Tstar = riccati_tstar(d.c2, d.c3, F0);
  return d;
}

struct ThresholdReport {
  bool AS1 = false;
  bool AS3 = false;
  double AS1_threshold = 0.0;  // 32 sigma max rho0 M^2 / (3 - gamma)
  double AS1_margin = 0.0;     // F0 - threshold
  double AS3_lhs = 0.0;
  double AS3_rhs = 0.0;        // 128 sigma^2 max rho0 M / (3 - gamma)
  double AS3_margin = 0.0;     // rhs - lhs
  double rhs_from_c = 0.0;     // 16 c2^2 / c3, equal to AS3_rhs
  double identity_rel_err = 0.0;
  bool both() const { return AS1 && AS3; }
};

inline ThresholdReport check_thresholds(const RiccatiData& d) {
  ThresholdReport r;
  const double g3 = 3.0 - d.gamma;
  r.AS1_threshold = 32.0 * d.sigma * d.max_rho0 * d.M * d.M / g3;
  r.AS1_margin = d.F0 - r.AS1_threshold;
  r.AS1 = d.F0 > r.AS1_threshold;
  r.AS3_lhs = 4.0 * (g3 * d.mu * d.tau2 / (d.M * d.M) + d.gamma - 1.0) * d.energy_bound();
  r.AS3_rhs = 128.0 * d.sigma * d.sigma * d.max_rho0 * d.M / g3;
  r.AS3_margin = r.AS3_rhs - r.AS3_lhs;
  r.AS3 = r.AS3_lhs <= r.AS3_rhs;
  r.rhs_from_c = 16.0 * d.c2 * d.c2 / d.c3;
  r.identity_rel_err = std::abs(r.rhs_from_c - r.AS3_rhs) / r.AS3_rhs;
  return r;
}

struct RiccatiTrajectory {
  std::vector<double> t;
  std::vector<double> y;
  bool blew_up = false;
  double blowup_time = std::numeric_limits<double>::infinity();

  /// Linear interpolation of y at time s; +inf past a detected blow-up.
  double at(double s) const {
    if (t.empty()) return 0.0;
    if (s <= t.front()) return y.front();
    if (s >= t.back()) return blew_up ? std::numeric_limits<double>::infinity() : y.back();
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const std::size_t k = static_cast<std::size_t>(it - t.begin());
    const double w = (s - t[k - 1]) / (t[k] - t[k - 1]);
    return (1.0 - w) * y[k - 1] + w * y[k];
  }
};

struct RiccatiOdeOptions {
  /// Multiplier on c3. 0.5 is the coefficient left after the forcing has
  /// been absorbed through the a priori bound 2K <= c3 F^2 / (1 + c2 t)^3;
  /// its blow-up time with K = 0 is exactly T*. 1.0 integrates the raw
  /// inequality.
  double coeff_scale = 0.5;
  bool include_K = true;
  double blowup_value = 1e12;
  /// Relative step control near the singularity: h <= rel_step * y / y'
  /// whenever y and y' are positive.
  double rel_step = 2e-3;
};

/// Classical RK4 for y' = s c3 (1 + c2 t)^{-3} y^2 - K(t), y(0) = F0, with
/// step size min(dt, rel_step * y / y') while y grows. Stops at t_end or
/// when y exceeds blowup_value (or becomes non-finite), which sets blew_up.
inline RiccatiTrajectory riccati_ode_solve(const RiccatiData& d, double t_end, double dt,
                                           const RiccatiOdeOptions& opt = {}) {
  auto rhs = [&](double t, double y) {
    return opt.coeff_scale * d.growth_coeff(t) * y * y - (opt.include_K ? d.K(t) : 0.0);
  };
  RiccatiTrajectory tr;
  double t = 0.0, y = d.F0;
  tr.t.push_back(t);
  tr.y.push_back(y);
  while (t < t_end) {
    const double f0 = rhs(t, y);
    double h = std::min(dt, t_end - t);
    if (f0 > 0.0 && y > 0.0) h = std::min(h, opt.rel_step * y / f0);
    const double k1 = f0;
    const double k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = rhs(t + h, y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    if (!std::isfinite(y) || y > opt.blowup_value) {
      tr.blew_up = true;
      tr.blowup_time = t;
      break;
    }
    tr.t.push_back(t);
    tr.y.push_back(y);
  }
  return tr;
}

struct FprimeMargin {
  double t_mid = 0.0;
  double margin = 0.0;          // dF/dt - Fdot_rhs at the midpoint
  double F = 0.0;
  double y = 0.0;               // comparison ODE value at t
  double F_lower_412 = 0.0;     // 4 c2 (1 + c2 t)^2 / c3
  bool F_above_y = true;
  bool F_above_412 = true;
};

/// Margins of the monitored inequalities along a series. rel_tol is the
/// relative slack allowed in the F >= y and F >= 4 c2 (1+c2 t)^2/c3 checks.
inline std::vector<FprimeMargin> fprime_lowerbound_check(const FunctionalSeries& s, const RiccatiData& d,
                                                         const RiccatiTrajectory& y, double rel_tol) {
  std::vector<FprimeMargin> out;
  for (std::size_t i = 1; i < s.size(); ++i) {
    FprimeMargin m;
    const double h = s[i].t - s[i - 1].t;
    m.t_mid = 0.5 * (s[i].t + s[i - 1].t);
    m.margin = (s[i].F - s[i - 1].F) / h - 0.5 * (s[i].Fdot_rhs + s[i - 1].Fdot_rhs);
    m.F = s[i].F;
    m.y = y.at(s[i].t);
    m.F_lower_412 = d.F_lower_bound(s[i].t);
    m.F_above_y = m.F >= m.y - rel_tol * std::abs(m.y);
    m.F_above_412 = m.F >= m.F_lower_412 * (1.0 - rel_tol);
    out.push_back(m);
  }
  return out;
}

}  // namespace relaxns
