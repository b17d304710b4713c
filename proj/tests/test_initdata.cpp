#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <numbers>

#include "relaxns/initdata.hpp"

using namespace relaxns;

namespace {

// Adaptive Gauss-Kronrod over each smooth piece of u0.
double integrate_pieces(double L, double M, auto integrand) {
  using boost::math::quadrature::gauss_kronrod;
  const double edges[] = {-M, -M + 1.0, -1.0, 1.0, M - 1.0, M};
  double total = 0.0;
  for (int k = 0; k + 1 < 6; ++k) {
    total += gauss_kronrod<double, 31>::integrate(integrand, edges[k], edges[k + 1], 15, 1e-14);
  }
  return total;
}

}  // namespace

TEST(Sideris, PieceValues) {
  const double L = 3.0, M = 6.0;
  EXPECT_EQ(sideris_u0(-7.0, L, M), 0.0);
  EXPECT_EQ(sideris_u0(7.0, L, M), 0.0);
  EXPECT_DOUBLE_EQ(sideris_u0(0.0, L, M), 0.0 + L * std::cos(-0.5 * std::numbers::pi));
  EXPECT_DOUBLE_EQ(sideris_u0(3.0, L, M), L);
  EXPECT_DOUBLE_EQ(sideris_u0(-3.0, L, M), -L);
  EXPECT_NEAR(sideris_u0(1.0, L, M), L, 1e-15);
  EXPECT_NEAR(sideris_u0(-1.0, L, M), -L, 1e-14);
}

TEST(Sideris, OddAndCompactlySupported) {
  for (double M : {4.0, 7.5}) {
    for (double x = -M - 1.0; x <= M + 1.0; x += 0.0137) {
      EXPECT_NEAR(sideris_u0(-x, 2.0, M), -sideris_u0(x, 2.0, M), 1e-13);
      if (std::abs(x) >= M) EXPECT_EQ(sideris_u0(x, 2.0, M), 0.0);
    }
  }
}

TEST(Sideris, C1AtJunctions) {
  for (double L : {1.0, 10.0, 33.85}) {
    for (double M : {4.0, 100.0}) {
      for (const auto& j : sideris_junctions(L, M)) {
        EXPECT_LE(std::abs(j.value_jump), 1e-12 * L) << j.x;
        EXPECT_LE(std::abs(j.slope_jump), 1e-12 * L) << j.x;
      }
    }
  }
}

TEST(Sideris, SlopeMatchesFiniteDifference) {
  const double L = 2.0, M = 5.0;
  for (double x : {-4.5, -2.0, -0.3, 0.7, 4.2}) {
    const double h = 1e-6;
    EXPECT_NEAR(sideris_u0_prime(x, L, M), (sideris_u0(x + h, L, M) - sideris_u0(x - h, L, M)) / (2 * h), 1e-7);
  }
}

TEST(Sideris, RequiresWideSupport) {
  EXPECT_THROW(sideris_u0(0.0, 1.0, 3.5), ConfigError);
  EXPECT_THROW(sideris_junctions(1.0, 2.0), ConfigError);
}

TEST(Sideris, MomentAndNormAgainstQuadrature) {
  for (double L : {1.0, 2.0, 10.0}) {
    for (double M : {4.0, 8.0, 100.0}) {
      const auto closed = u0_moment_and_norm(L, M);
      const double moment = integrate_pieces(L, M, [&](double x) { return x * sideris_u0(x, L, M); });
      const double norm2 = integrate_pieces(L, M, [&](double x) {
        const double v = sideris_u0(x, L, M);
        return v * v;
      });
      EXPECT_NEAR(closed.moment, moment, 1e-10 * std::max(1.0, std::abs(moment))) << L << " " << M;
      EXPECT_NEAR(closed.norm2, norm2, 1e-10 * std::max(1.0, norm2)) << L << " " << M;
      EXPECT_GE(closed.moment, L * M * M / 2.0);
    }
  }
}

TEST(Bump, ShapeAndSupport) {
  EXPECT_DOUBLE_EQ(bump(0.0, 2.0), 1.0);
  EXPECT_EQ(bump(2.0, 2.0), 0.0);
  EXPECT_EQ(bump(-2.5, 2.0), 0.0);
  EXPECT_GT(bump(1.99, 2.0), 0.0);
  for (double x = -2.0; x <= 2.0; x += 0.01) EXPECT_NEAR(bump(x, 2.0), bump(-x, 2.0), 1e-15);
  // C^2 at the knots s = +-1 and s = +-2.
  auto d2 = [](double s) {
    const double h = 1e-4;
    return (spline_bump(s + h) - 2 * spline_bump(s) + spline_bump(s - h)) / (h * h);
  };
  EXPECT_NEAR(d2(1.0 - 1e-3), d2(1.0 + 1e-3), 2e-2);
  EXPECT_NEAR(d2(2.0 - 1e-3), 0.0, 2e-2);
}

TEST(InitSpec, SmallDataPreset) {
  const Grid g{-10.0, 10.0, 400};
  const Field f = small_data_field(1e-3, g);
  double peak = 0.0;
  for (int i = 0; i < g.N; ++i) {
    EXPECT_NEAR(f[i].rho - 1.0, f[i].u, 1e-15);
    EXPECT_NEAR(f[i].theta - 1.0, f[i].u, 1e-15);
    EXPECT_EQ(f[i].q, 0.0);
    EXPECT_EQ(f[i].S, 0.0);
    if (std::abs(g.x(i)) >= 2.0) EXPECT_EQ(f[i].u, 0.0);
    peak = std::max(peak, f[i].u);
  }
  EXPECT_NEAR(peak, 1e-3, 1e-5);
}

TEST(InitSpec, RejectsSiderisOutsideVelocity) {
  InitSpec s;
  s.rho = {ProfileKind::sideris, 1.0, 4.0};
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(BuildInitialField, BackgroundReport) {
  const Grid g{-10.0, 10.0, 100};
  const auto init = build_initial_field(InitSpec{}, g, GasParams{});
  EXPECT_EQ(init.report.G0, 0.0);
  EXPECT_EQ(init.report.F0, 0.0);
  EXPECT_EQ(init.report.H0, 0.0);
  EXPECT_EQ(init.report.M, 0.0);
  EXPECT_TRUE(init.report.support_inside_domain);
}

TEST(BuildInitialField, SiderisReport) {
  const Grid g{-12.0, 12.0, 2400};
  InitSpec spec;
  spec.u = {ProfileKind::sideris, 2.0, 8.0};
  GasParams p;
  const auto init = build_initial_field(spec, g, p);
  const auto closed = u0_moment_and_norm(2.0, 8.0);
  EXPECT_NEAR(init.report.F0, closed.moment, 1e-4 * closed.moment);
  EXPECT_NEAR(init.report.u0_l2sq, closed.norm2, 1e-4 * closed.norm2);
  EXPECT_NEAR(init.report.G0, 0.5 * closed.norm2, 1e-4 * closed.norm2);
  EXPECT_GT(init.report.G0, 0.0);
  EXPECT_TRUE(init.report.c1_junctions_ok);
  EXPECT_TRUE(init.report.support_inside_domain);
  EXPECT_EQ(init.report.M, 8.0);
  EXPECT_LE(init.report.support_radius, 8.0);
}

TEST(BuildInitialField, RejectsNonpositiveDensity) {
  InitSpec spec;
  spec.rho = {ProfileKind::bump, -1.5, 2.0};
  EXPECT_THROW(build_initial_field(spec, Grid{-5.0, 5.0, 100}, GasParams{}), ConfigError);
  spec = {};
  spec.theta = {ProfileKind::bump, -1.0, 2.0};  // theta = 0 at the centre cell only if sampled there
  EXPECT_THROW(build_initial_field(spec, Grid{-5.0, 5.0, 101}, GasParams{}), ConfigError);
}

TEST(BuildInitialField, WarnsWhenSupportLeavesDomain) {
  InitSpec spec;
  spec.u = {ProfileKind::sideris, 1.0, 6.0};
  const auto init = build_initial_field(spec, Grid{-5.0, 5.0, 200}, GasParams{});
  EXPECT_FALSE(init.report.support_inside_domain);
}
