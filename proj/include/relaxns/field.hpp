#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "relaxns/errors.hpp"
#include "relaxns/model.hpp"

namespace relaxns {

/// Uniform cell-centred grid on [xmin, xmax].
struct Grid {
  double xmin = -10.0;
  double xmax = 10.0;
  int N = 400;

  double dx() const { return (xmax - xmin) / N; }
  double x(int i) const { return xmin + (i + 0.5) * dx(); }
  double length() const { return xmax - xmin; }

  void validate() const {
    if (N < 16) throw ConfigError("grid.N must be at least 16");
    if (!(xmax > xmin)) throw ConfigError("grid.xmax must exceed grid.xmin");
  }

  /// True when [-radius, radius] lies strictly inside the domain.
  bool contains(double radius) const { return xmin < -radius && xmax > radius; }
};

using Field = std::vector<PrimitiveState>;
using ConservedField = std::vector<ConservedState>;

inline constexpr int kGhosts = 2;

/// Copy of the field with kGhosts background cells on each side.
inline Field fill_ghosts(std::span<const PrimitiveState> field) {
  Field ext(field.size() + 2 * kGhosts, PrimitiveState::background());
  std::copy(field.begin(), field.end(), ext.begin() + kGhosts);
  return ext;
}

/// Central differences of a scalar projection; neighbours outside the grid
/// take the background value.
template <class Proj>
std::vector<double> central_gradient(std::span<const PrimitiveState> field, double dx, Proj proj) {
  const auto bg = proj(PrimitiveState::background());
  const std::size_t n = field.size();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i == 0 ? bg : proj(field[i - 1]);
    const double right = i + 1 == n ? bg : proj(field[i + 1]);
    g[i] = (right - left) / (2.0 * dx);
  }
  return g;
}

inline std::vector<double> grad_u(std::span<const PrimitiveState> f, double dx) {
  return central_gradient(f, dx, [](const PrimitiveState& s) { return s.u; });
}

inline std::vector<double> grad_theta(std::span<const PrimitiveState> f, double dx) {
  return central_gradient(f, dx, [](const PrimitiveState& s) { return s.theta; });
}

inline double deviation_from_background(const PrimitiveState& s) {
  return std::max({std::abs(s.rho - 1.0), std::abs(s.u), std::abs(s.theta - 1.0), std::abs(s.q),
                   std::abs(s.S)});
}

inline Field to_primitive(const GasParams& p, std::span<const ConservedState> c) {
  Field f(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) f[i] = cons_to_prim(p, c[i]);
  return f;
}

inline ConservedField to_conserved(const GasParams& p, std::span<const PrimitiveState> f) {
  ConservedField c(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) c[i] = prim_to_cons(p, f[i]);
  return c;
}

}  // namespace relaxns
