#pragma once

// Thermodynamic closure of the relaxed Navier-Stokes system: ideal-gas
// pressure, internal energy with a heat-flux contribution a(theta) q^2, the
// relaxation family Z(theta) = tau1(theta)/kappa = k theta^alpha, and the
// physical entropy.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "relaxns/errors.hpp"

namespace relaxns {

struct GasParams {
  double Cv = 1.0;      // heat capacity at constant volume
  double R = 0.4;       // gas constant
  double mu = 1.0;      // viscosity
  double tau2 = 0.1;    // stress relaxation time
  double kappa0 = 1.0;  // heat conductivity (constant)
  double Zk = 0.1;      // Z(theta) = Zk * theta^Zalpha
  double Zalpha = 1.0;
  double sigma = 2.0;   // assumed propagation-speed bound

  double gamma() const { return 1.0 + R / Cv; }

  /// Throws ConfigError naming the first parameter out of range.
  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw ConfigError(what);
    };
    require(Cv > 0.0 && std::isfinite(Cv), "gas.Cv must be positive");
    require(R > 0.0 && std::isfinite(R), "gas.R must be positive");
    require(mu > 0.0 && std::isfinite(mu), "gas.mu must be positive");
    require(tau2 > 0.0 && std::isfinite(tau2), "gas.tau2 must be positive");
    require(kappa0 > 0.0 && std::isfinite(kappa0), "gas.kappa0 must be positive");
    require(Zk > 0.0 && std::isfinite(Zk), "gas.Zk must be positive");
    require(Zalpha >= 1.0 && Zalpha < 2.0, "gas.Zalpha must lie in [1, 2)");
    require(sigma > 0.0 && std::isfinite(sigma), "gas.sigma must be positive");
    require(gamma() < 3.0, "gamma = 1 + R/Cv must lie in (1, 3)");
  }
};

struct PrimitiveState {
  double rho = 1.0;
  double u = 0.0;
  double theta = 1.0;
  double q = 0.0;
  double S = 0.0;

  static constexpr PrimitiveState background() { return {}; }
  friend bool operator==(const PrimitiveState&, const PrimitiveState&) = default;
};

/// Cell averages of (rho, rho u, E, rho q, rho S).
struct ConservedState {
  double rho = 1.0;
  double mom = 0.0;
  double Etot = 1.0;
  double w = 0.0;
  double z = 0.0;

  friend bool operator==(const ConservedState&, const ConservedState&) = default;
};

namespace detail {
inline void require_positive_theta(double theta) {
  if (!(theta > 0.0)) throw DomainError("temperature must be positive, got " + std::to_string(theta));
}
inline void require_positive_rho(double rho) {
  if (!(rho > 0.0)) throw DomainError("density must be positive, got " + std::to_string(rho));
}
}  // namespace detail

inline double Z(const GasParams& p, double theta) {
  detail::require_positive_theta(theta);
  return p.Zk * std::pow(theta, p.Zalpha);
}

inline double Zprime(const GasParams& p, double theta) {
  detail::require_positive_theta(theta);
  return p.Zk * p.Zalpha * std::pow(theta, p.Zalpha - 1.0);
}

/// tau1(theta) = Z(theta) * kappa.
inline double tau1(const GasParams& p, double theta) { return Z(p, theta) * p.kappa0; }

/// a = Z/theta - Z'/2 = k theta^(alpha-1) (1 - alpha/2).
inline double a_of_theta(const GasParams& p, double theta) {
  detail::require_positive_theta(theta);
  return p.Zk * std::pow(theta, p.Zalpha - 1.0) * (1.0 - 0.5 * p.Zalpha);
}

inline double a_prime(const GasParams& p, double theta) {
  detail::require_positive_theta(theta);
  return p.Zk * (p.Zalpha - 1.0) * (1.0 - 0.5 * p.Zalpha) * std::pow(theta, p.Zalpha - 2.0);
}

/// (Z/theta)' = k (alpha-1) theta^(alpha-2).
inline double Z_over_theta_prime(const GasParams& p, double theta) {
  detail::require_positive_theta(theta);
  return p.Zk * (p.Zalpha - 1.0) * std::pow(theta, p.Zalpha - 2.0);
}

/// Coefficient of q^2 in the entropy-based energy: a + (Z/theta)'/2.
inline double q2_energy_coeff(const GasParams& p, double theta) {
  return a_of_theta(p, theta) + 0.5 * Z_over_theta_prime(p, theta);
}

inline double pressure(const GasParams& p, double rho, double theta) {
  detail::require_positive_rho(rho);
  detail::require_positive_theta(theta);
  return p.R * rho * theta;
}

inline double internal_energy(const GasParams& p, double theta, double q) {
  return p.Cv * theta + a_of_theta(p, theta) * q * q;
}

inline double e_theta(const GasParams& p, double theta, double q) {
  return p.Cv + a_prime(p, theta) * q * q;
}

inline double total_energy(const GasParams& p, const PrimitiveState& s) {
  detail::require_positive_rho(s.rho);
  return 0.5 * s.rho * s.u * s.u + p.tau2 / (2.0 * p.mu) * s.rho * s.S * s.S +
         s.rho * internal_energy(p, s.theta, s.q);
}

/// eta = Cv ln(theta) - R ln(rho) - (Z/(2 theta))' q^2.
inline double entropy(const GasParams& p, const PrimitiveState& s) {
  detail::require_positive_rho(s.rho);
  detail::require_positive_theta(s.theta);
  return p.Cv * std::log(s.theta) - p.R * std::log(s.rho) -
         0.5 * Z_over_theta_prime(p, s.theta) * s.q * s.q;
}

/// Solves rho (Cv theta + a(theta) q^2) = Etot - rho u^2/2 - tau2 rho S^2/(2 mu)
/// for theta > 0. The left side is strictly increasing in theta, so a
/// bracketed Newton iteration with bisection fallback always converges when
/// a root exists.
inline double theta_from_energy(const GasParams& p, double rho, double u, double q, double S,
                                double Etot) {
  detail::require_positive_rho(rho);
  const double rho_e = Etot - 0.5 * rho * u * u - p.tau2 / (2.0 * p.mu) * rho * S * S;
  if (!(rho_e > 0.0) || !std::isfinite(rho_e)) {
    throw DomainError("nonpositive internal energy " + std::to_string(rho_e));
  }
  const double e = rho_e / rho;
  if (q == 0.0) return e / p.Cv;

  const double q2 = q * q;
  auto residual = [&](double th) { return p.Cv * th + a_of_theta(p, th) * q2 - e; };
  double lo = 1e-8;
  double hi = e / p.Cv + 1.0;
  if (residual(lo) > 0.0) {
    throw DomainError("heat-flux energy exceeds internal energy; no admissible temperature");
  }
  const double tol = 1e-12 * std::max(1.0, Etot) / rho;
  // a(theta) q^2 >= 0, so the root lies at or below e/Cv.
  double th = std::min(e / p.Cv, hi);
  for (int it = 0; it < 200; ++it) {
    const double f = residual(th);
    if (std::abs(f) <= tol) return th;
    if (f > 0.0) hi = th; else lo = th;
    double next = th - f / e_theta(p, th, q);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return next;
    th = next;
  }
  return th;
}

inline ConservedState prim_to_cons(const GasParams& p, const PrimitiveState& s) {
  return {s.rho, s.rho * s.u, total_energy(p, s), s.rho * s.q, s.rho * s.S};
}

inline PrimitiveState cons_to_prim(const GasParams& p, const ConservedState& c) {
  detail::require_positive_rho(c.rho);
  PrimitiveState s;
  s.rho = c.rho;
  s.u = c.mom / c.rho;
  s.q = c.w / c.rho;
  s.S = c.z / c.rho;
  s.theta = theta_from_energy(p, s.rho, s.u, s.q, s.S, c.Etot);
  return s;
}

struct Assumption31Point {
  double theta = 0.0;
  bool a_positive = false;
  bool a_nondecreasing = false;
  bool Z_over_theta_nondecreasing = false;
};

struct Assumption31Report {
  std::vector<Assumption31Point> points;
  bool all_pass = false;
};

/// Evaluates a > 0, a' >= 0 and (Z/theta)' >= 0 on every grid temperature.
/// Parameters are not validated, so inadmissible families can be probed.
inline Assumption31Report check_assumption31(const GasParams& p, std::span<const double> theta_grid) {
  Assumption31Report rep;
  rep.all_pass = !theta_grid.empty();
  for (double th : theta_grid) {
    Assumption31Point pt{th};
    pt.a_positive = a_of_theta(p, th) > 0.0;
    pt.a_nondecreasing = a_prime(p, th) >= 0.0;
    pt.Z_over_theta_nondecreasing = Z_over_theta_prime(p, th) >= 0.0;
    rep.all_pass = rep.all_pass && pt.a_positive && pt.a_nondecreasing && pt.Z_over_theta_nondecreasing;
    rep.points.push_back(pt);
  }
  return rep;
}

}  // namespace relaxns
