#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "relaxns/model.hpp"

using namespace relaxns;

namespace {

double central(auto f, double x, double h) { return (f(x + h) - f(x - h)) / (2.0 * h); }

GasParams family(double k, double alpha) {
  GasParams p;
  p.Zk = k;
  p.Zalpha = alpha;
  return p;
}

}  // namespace

TEST(GasParams, DefaultsAreValid) {
  GasParams p;
  EXPECT_NO_THROW(p.validate());
  EXPECT_DOUBLE_EQ(p.gamma(), 1.4);
}

TEST(GasParams, RejectsOutOfRange) {
  auto bad = [](auto mutate) {
    GasParams p;
    mutate(p);
    EXPECT_THROW(p.validate(), ConfigError);
  };
  bad([](GasParams& p) { p.R = -1.0; });
  bad([](GasParams& p) { p.Cv = 0.0; });
  bad([](GasParams& p) { p.mu = 0.0; });
  bad([](GasParams& p) { p.tau2 = -0.1; });
  bad([](GasParams& p) { p.Zalpha = 2.0; });
  bad([](GasParams& p) { p.Zalpha = 0.5; });
  bad([](GasParams& p) { p.R = 2.5; });  // gamma = 3.5
  bad([](GasParams& p) { p.sigma = std::nan(""); });
}

TEST(Constitutive, DerivativesMatchFiniteDifferences) {
  for (double alpha : {1.0, 1.3, 1.7, 1.99}) {
    const GasParams p = family(0.7, alpha);
    for (double th : {0.2, 0.9, 1.0, 3.7}) {
      const double h = 1e-5 * th;
      EXPECT_NEAR(Zprime(p, th), central([&](double x) { return Z(p, x); }, th, h), 1e-8);
      EXPECT_NEAR(a_prime(p, th), central([&](double x) { return a_of_theta(p, x); }, th, h), 1e-8);
      EXPECT_NEAR(Z_over_theta_prime(p, th), central([&](double x) { return Z(p, x) / x; }, th, h), 1e-8);
      EXPECT_NEAR(e_theta(p, th, 0.8), central([&](double x) { return internal_energy(p, x, 0.8); }, th, h), 1e-8);
    }
  }
}

TEST(Constitutive, AIsZOverThetaMinusHalfZprime) {
  const GasParams p = family(0.3, 1.5);
  for (double th : {0.1, 1.0, 4.0}) {
    EXPECT_NEAR(a_of_theta(p, th), Z(p, th) / th - 0.5 * Zprime(p, th), 1e-15);
  }
}

TEST(Constitutive, AlphaOneGivesConstantA) {
  const GasParams p = family(0.4, 1.0);
  EXPECT_DOUBLE_EQ(a_of_theta(p, 0.5), 0.2);
  EXPECT_DOUBLE_EQ(a_of_theta(p, 5.0), 0.2);
  EXPECT_DOUBLE_EQ(a_prime(p, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(Z_over_theta_prime(p, 2.0), 0.0);
}

// theta * d(eta)/d(theta) = de/d(theta) at fixed rho and q.
TEST(Constitutive, EntropyTemperatureRelation) {
  for (double alpha : {1.0, 1.4, 1.8}) {
    const GasParams p = family(0.9, alpha);
    for (double th : {0.3, 1.0, 2.5}) {
      const double q = 1.3;
      auto eta = [&](double x) { return entropy(p, {1.7, 0.2, x, q, 0.4}); };
      EXPECT_NEAR(th * central(eta, th, 1e-5 * th), e_theta(p, th, q), 1e-7);
    }
  }
}

TEST(Constitutive, BackgroundValues) {
  const GasParams p;
  const PrimitiveState bg = PrimitiveState::background();
  EXPECT_DOUBLE_EQ(total_energy(p, bg), p.Cv);
  EXPECT_DOUBLE_EQ(entropy(p, bg), 0.0);
  EXPECT_DOUBLE_EQ(pressure(p, 1.0, 1.0), p.R);
}

TEST(Constitutive, TotalEnergyDecomposition) {
  const GasParams p = family(0.5, 1.2);
  const PrimitiveState s{2.0, -1.5, 0.7, 0.9, -0.6};
  const double expected = 0.5 * 2.0 * 2.25 + p.tau2 * 2.0 * 0.36 / (2.0 * p.mu) +
                          2.0 * (p.Cv * 0.7 + a_of_theta(p, 0.7) * 0.81);
  EXPECT_NEAR(total_energy(p, s), expected, 1e-14);
}

TEST(Constitutive, DomainErrors) {
  const GasParams p;
  EXPECT_THROW(Z(p, 0.0), DomainError);
  EXPECT_THROW(pressure(p, -1.0, 1.0), DomainError);
  EXPECT_THROW(entropy(p, {1.0, 0.0, -1.0, 0.0, 0.0}), DomainError);
  EXPECT_THROW(theta_from_energy(p, 1.0, 3.0, 0.0, 0.0, 1.0), DomainError);
}

TEST(ThetaFromEnergy, ExactWithoutHeatFlux) {
  const GasParams p;
  const PrimitiveState s{1.3, 0.4, 2.5, 0.0, 0.7};
  EXPECT_EQ(cons_to_prim(p, prim_to_cons(p, s)).theta, (total_energy(p, s) - 0.5 * 1.3 * 0.16 -
                                                         p.tau2 / (2.0 * p.mu) * 1.3 * 0.49) / 1.3 / p.Cv);
}

TEST(ThetaFromEnergy, RandomRoundTrip) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(0.2, 5.0), sym(-5.0, 5.0), k(0.01, 2.0), al(1.0, 1.999);
  for (int n = 0; n < 10000; ++n) {
    GasParams p = family(k(rng), al(rng));
    const PrimitiveState s{pos(rng), sym(rng), pos(rng), sym(rng), sym(rng)};
    const PrimitiveState back = cons_to_prim(p, prim_to_cons(p, s));
    ASSERT_NEAR(back.theta, s.theta, 1e-9 * std::max(1.0, s.theta)) << n;
    ASSERT_DOUBLE_EQ(back.rho, s.rho);
    ASSERT_NEAR(back.u, s.u, 1e-14 * std::max(1.0, std::abs(s.u)));
    ASSERT_NEAR(back.q, s.q, 1e-14 * std::max(1.0, std::abs(s.q)));
    ASSERT_NEAR(back.S, s.S, 1e-14 * std::max(1.0, std::abs(s.S)));
  }
}

TEST(Assumption31, AdmissibleFamilyPasses) {
  std::vector<double> grid;
  for (int i = 1; i <= 50; ++i) grid.push_back(0.1 * i);
  for (double alpha : {1.0, 1.5, 1.9}) EXPECT_TRUE(check_assumption31(family(1.0, alpha), grid).all_pass);
}

TEST(Assumption31, OutsideFamilyFails) {
  const std::vector<double> grid{0.5, 1.0, 2.0};
  const auto low = check_assumption31(family(1.0, 0.5), grid);
  EXPECT_FALSE(low.all_pass);
  EXPECT_FALSE(low.points[0].Z_over_theta_nondecreasing);
  const auto high = check_assumption31(family(1.0, 2.5), grid);
  EXPECT_FALSE(high.all_pass);
  EXPECT_FALSE(high.points[0].a_positive);
  EXPECT_FALSE(check_assumption31(family(1.0, 2.0), grid).all_pass);  // a == 0
}
