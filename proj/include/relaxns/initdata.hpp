#pragma once

// Initial data: the odd piecewise-cosine velocity profile with plateaus of
// height L on (1, M-1), compact C^2 bumps, and the small-data preset.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "relaxns/errors.hpp"
#include "relaxns/field.hpp"
#include "relaxns/functionals.hpp"
#include "relaxns/model.hpp"

namespace relaxns {

namespace detail {
inline void require_sideris_width(double M) {
  if (!(M >= 4.0)) throw ConfigError("sideris velocity needs support half-width M >= 4");
}

/// Piece index of x in the seven-piece partition
/// (-inf,-M] (-M,-M+1] (-M+1,-1] (-1,1] (1,M-1] (M-1,M] (M,inf).
inline int sideris_piece(double x, double M) {
  if (x <= -M) return 0;
  if (x <= -M + 1.0) return 1;
  if (x <= -1.0) return 2;
  if (x <= 1.0) return 3;
  if (x <= M - 1.0) return 4;
  if (x <= M) return 5;
  return 6;
}

inline double sideris_piece_value(int piece, double x, double L, double M) {
  using std::numbers::pi;
  switch (piece) {
    case 1: return 0.5 * L * std::cos(pi * (x + M)) - 0.5 * L;
    case 2: return -L;
    case 3: return L * std::cos(0.5 * pi * (x - 1.0));
    case 4: return L;
    case 5: return 0.5 * L * std::cos(pi * (x - M + 1.0)) + 0.5 * L;
    default: return 0.0;
  }
}

inline double sideris_piece_slope(int piece, double x, double L, double M) {
  using std::numbers::pi;
  switch (piece) {
    case 1: return -0.5 * L * pi * std::sin(pi * (x + M));
    case 3: return -0.5 * L * pi * std::sin(0.5 * pi * (x - 1.0));
    case 5: return -0.5 * L * pi * std::sin(pi * (x - M + 1.0));
    default: return 0.0;
  }
}
}  // namespace detail

inline double sideris_u0(double x, double L, double M) {
  detail::require_sideris_width(M);
  return detail::sideris_piece_value(detail::sideris_piece(x, M), x, L, M);
}

inline double sideris_u0_prime(double x, double L, double M) {
  detail::require_sideris_width(M);
  return detail::sideris_piece_slope(detail::sideris_piece(x, M), x, L, M);
}

struct JunctionCheck {
  double x = 0.0;
  double value_jump = 0.0;
  double slope_jump = 0.0;
};

/// One-sided values and slopes of neighbouring pieces at the six junctions.
inline std::vector<JunctionCheck> sideris_junctions(double L, double M) {
  detail::require_sideris_width(M);
  const std::array<double, 6> xs{-M, -M + 1.0, -1.0, 1.0, M - 1.0, M};
  std::vector<JunctionCheck> out;
  for (int j = 0; j < 6; ++j) {
    const double x = xs[j];
    out.push_back({x,
                   detail::sideris_piece_value(j + 1, x, L, M) - detail::sideris_piece_value(j, x, L, M),
                   detail::sideris_piece_slope(j + 1, x, L, M) - detail::sideris_piece_slope(j, x, L, M)});
  }
  return out;
}

struct U0Integrals {
  double moment = 0.0;  // int x u0 dx
  double norm2 = 0.0;   // int u0^2 dx
};

inline U0Integrals u0_moment_and_norm(double L, double M) {
  detail::require_sideris_width(M);
  using std::numbers::pi;
  return {2.0 * L * (0.5 * M * M - 0.5 * M - 0.25 + 3.0 / (pi * pi)), (2.0 * M - 2.25) * L * L};
}

/// C^2 cubic B-spline bump on (-2, 2) scaled to peak 1.
inline double spline_bump(double s) {
  const double a = std::abs(s);
  if (a >= 2.0) return 0.0;
  const double B = a < 1.0 ? 2.0 / 3.0 - a * a + 0.5 * a * a * a : (2.0 - a) * (2.0 - a) * (2.0 - a) / 6.0;
  return 1.5 * B;
}

/// Bump supported in (-halfwidth, halfwidth) with peak 1 at 0.
inline double bump(double x, double halfwidth) { return spline_bump(2.0 * x / halfwidth); }

enum class ProfileKind { background, sideris, bump };

inline ProfileKind parse_profile_kind(const std::string& s) {
  if (s == "background") return ProfileKind::background;
  if (s == "sideris") return ProfileKind::sideris;
  if (s == "bump") return ProfileKind::bump;
  throw ConfigError("unknown profile kind '" + s + "'");
}

inline const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::background: return "background";
    case ProfileKind::sideris: return "sideris";
    case ProfileKind::bump: return "bump";
  }
  return "?";
}

/// Perturbation of one primitive variable. For rho and theta the profile is
/// added to the background value 1.
struct ProfileSpec {
  ProfileKind kind = ProfileKind::background;
  double amplitude = 0.0;
  double halfwidth = 4.0;

  double operator()(double x) const {
    switch (kind) {
      case ProfileKind::background: return 0.0;
      case ProfileKind::sideris: return sideris_u0(x, amplitude, halfwidth);
      case ProfileKind::bump: return amplitude * bump(x, halfwidth);
    }
    return 0.0;
  }

  double support() const { return kind == ProfileKind::background ? 0.0 : halfwidth; }
};

struct InitSpec {
  ProfileSpec rho, u, theta, q, S;

  /// Half-width M of the union of supports.
  double support_halfwidth() const {
    return std::max({rho.support(), u.support(), theta.support(), q.support(), S.support()});
  }

  void validate() const {
    if (rho.kind == ProfileKind::sideris || theta.kind == ProfileKind::sideris ||
        q.kind == ProfileKind::sideris || S.kind == ProfileKind::sideris) {
      throw ConfigError("sideris profile is only defined for the velocity");
    }
    for (const ProfileSpec* p : {&rho, &u, &theta, &q, &S}) {
      if (p->kind == ProfileKind::background) continue;
      if (!std::isfinite(p->amplitude)) throw ConfigError("profile amplitude must be finite");
      if (!(p->halfwidth > 0.0)) throw ConfigError("profile half-width must be positive");
    }
    if (u.kind == ProfileKind::sideris) detail::require_sideris_width(u.halfwidth);
  }
};

/// Small-data preset: rho, theta = 1 + eps b, u = eps b, q = S = 0 with b
/// the unit bump on (-2, 2).
inline InitSpec small_data_spec(double epsilon) {
  InitSpec s;
  const ProfileSpec b{ProfileKind::bump, epsilon, 2.0};
  s.rho = b;
  s.theta = b;
  s.u = b;
  return s;
}

/// Midpoint samples of the profiles.
inline Field sample_field(const InitSpec& spec, const Grid& g) {
  Field f(g.N);
  for (int i = 0; i < g.N; ++i) {
    const double x = g.x(i);
    f[i] = {1.0 + spec.rho(x), spec.u(x), 1.0 + spec.theta(x), spec.q(x), spec.S(x)};
  }
  return f;
}

inline Field small_data_field(double epsilon, const Grid& g) {
  return sample_field(small_data_spec(epsilon), g);
}

struct AdmissibilityReport {
  double min_rho0 = 0.0;
  double min_theta0 = 0.0;
  double max_rho0 = 0.0;
  double support_radius = 0.0;
  double M = 0.0;
  double G0 = 0.0;
  double H0 = 0.0;
  double I0 = 0.0;
  double F0 = 0.0;
  double u0_l2sq = 0.0;
  bool support_inside_domain = false;
  bool c1_junctions_ok = true;  // vacuous unless the velocity is sideris
  std::vector<JunctionCheck> junctions;
};

struct InitialField {
  Field field;
  AdmissibilityReport report;
};

/// Samples the initial field and checks positivity, support and
/// smoothness. Throws ConfigError on nonpositive density or temperature.
inline InitialField build_initial_field(const InitSpec& spec, const Grid& g, const GasParams& p) {
  spec.validate();
  InitialField out{sample_field(spec, g), {}};
  AdmissibilityReport& r = out.report;
  r.min_rho0 = min_rho(out.field);
  r.min_theta0 = min_theta(out.field);
  if (!(r.min_rho0 > 0.0)) throw ConfigError("initial density must be positive");
  if (!(r.min_theta0 > 0.0)) throw ConfigError("initial temperature must be positive");
  r.max_rho0 = max_rho(out.field);
  r.M = spec.support_halfwidth();
  r.support_radius = support_radius(out.field, g, 0.0);
  r.support_inside_domain = r.M == 0.0 || g.contains(r.M);
  r.G0 = energy_G(std::span<const PrimitiveState>(out.field), g, p);
  r.H0 = H0_functional(out.field, g, p);
  r.I0 = I0_functional(out.field, g, p);
  r.F0 = moment_F(out.field, g, p);
  r.u0_l2sq = u_l2sq(out.field, g);
  if (spec.u.kind == ProfileKind::sideris) {
    r.junctions = sideris_junctions(spec.u.amplitude, spec.u.halfwidth);
    const double scale = std::max(1.0, std::abs(spec.u.amplitude));
    for (const auto& j : r.junctions) {
      r.c1_junctions_ok = r.c1_junctions_ok && std::abs(j.value_jump) <= 1e-12 * scale &&
                          std::abs(j.slope_jump) <= 1e-12 * scale;
    }
  }
  return out;
}

}  // namespace relaxns
