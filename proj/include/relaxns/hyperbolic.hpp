#pragma once

// Symmetric quasilinear form  A0(U) U_t + A1(U) U_x + B(U) U = F(U)  for
// U = (rho, u, theta, q, S), and the characteristic speeds it induces.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <span>

#include "relaxns/model.hpp"

namespace relaxns {

using Mat5 = Eigen::Matrix<double, 5, 5>;
using Vec5 = Eigen::Matrix<double, 5, 1>;

struct QuasilinearMatrices {
  Vec5 A0 = Vec5::Zero();  // diagonal
  Mat5 A1 = Mat5::Zero();
  Vec5 Bdiag = Vec5::Zero();
  Vec5 source = Vec5::Zero();  // only the theta row is nonzero
};

inline void require_admissible(const PrimitiveState& s) {
  if (!(s.rho > 0.0) || !(s.theta > 0.0) || !std::isfinite(s.u) || !std::isfinite(s.q) ||
      !std::isfinite(s.S)) {
    throw DomainError("inadmissible state");
  }
}

/// The q-row is the heat-flux law divided by kappa*theta, which is what makes
/// it pair symmetrically with the 1/theta coupling in the theta-row; hence
/// A0(q,q) = tau1 rho/(kappa theta) = Z rho/theta.
inline QuasilinearMatrices assemble(const PrimitiveState& s, const GasParams& p) {
  require_admissible(s);
  const double rho = s.rho, u = s.u, th = s.theta, q = s.q;
  const double R = p.R;
  const double eth = e_theta(p, th, q);
  const double z = Z(p, th);
  const double a = a_of_theta(p, th);

  QuasilinearMatrices m;
  m.A0 << R * th / rho, rho, rho * eth / th, z * rho / th, p.tau2 * rho / p.mu;

  Mat5& A = m.A1;
  A(0, 0) = R * th * u / rho;
  A(1, 1) = rho * u;
  A(2, 2) = rho * u * eth / th - 2.0 * a * q / (th * z);
  A(3, 3) = z * rho * u / th;
  A(4, 4) = p.tau2 * rho * u / p.mu;
  A(0, 1) = A(1, 0) = R * th;
  A(1, 2) = A(2, 1) = R * rho;
  A(1, 4) = A(4, 1) = -1.0;
  A(2, 3) = A(3, 2) = 1.0 / th;

  m.Bdiag << 0.0, 0.0, 0.0, 1.0 / (p.kappa0 * th), 1.0 / p.mu;
  m.source(2) = (2.0 * a * q * q / tau1(p, th) + s.S * s.S / p.mu) / th;
  return m;
}

/// Generalized eigenvalues of lambda A0 = A1, ascending. Computed on the
/// congruent symmetric matrix A0^{-1/2} A1 A0^{-1/2}.
inline std::array<double, 5> char_speeds(const PrimitiveState& s, const GasParams& p) {
  const QuasilinearMatrices m = assemble(s, p);
  const Vec5 scale = m.A0.cwiseSqrt().cwiseInverse();
  const Mat5 C = scale.asDiagonal() * m.A1 * scale.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Mat5> es(C, Eigen::EigenvaluesOnly);
  const Vec5& ev = es.eigenvalues();
  return {ev(0), ev(1), ev(2), ev(3), ev(4)};
}

inline double max_abs_speed(const PrimitiveState& s, const GasParams& p) {
  const auto ev = char_speeds(s, p);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

inline double max_speed(std::span<const PrimitiveState> field, const GasParams& p) {
  double best = 0.0;
  for (const auto& s : field) best = std::max(best, max_abs_speed(s, p));
  return best;
}

struct StructureReport {
  bool A0_positive = false;
  bool A1_symmetric = false;
  bool B_nonnegative = false;
  bool source_matches = false;
  bool all() const { return A0_positive && A1_symmetric && B_nonnegative && source_matches; }
};

inline StructureReport verify_structure(const PrimitiveState& s, const GasParams& p) {
  const QuasilinearMatrices m = assemble(s, p);
  StructureReport r;
  r.A0_positive = (m.A0.array() > 0.0).all();
  r.A1_symmetric = (m.A1 - m.A1.transpose()).cwiseAbs().maxCoeff() == 0.0;
  r.B_nonnegative = (m.Bdiag.array() >= 0.0).all();
  const double expected =
      2.0 * a_of_theta(p, s.theta) * s.q * s.q / (tau1(p, s.theta) * s.theta) +
      s.S * s.S / (p.mu * s.theta);
  r.source_matches = std::abs(m.source(2) - expected) <= 1e-14 * std::max(1.0, std::abs(expected)) &&
                     m.source(0) == 0.0 && m.source(1) == 0.0 && m.source(3) == 0.0 &&
                     m.source(4) == 0.0;
  return r;
}

}  // namespace relaxns
