#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "conelef/errors.hpp"
#include "conelef/specfun.hpp"

using namespace conelef;

namespace {

struct Sample {
  double nu, x, expected;
};

// Reference values from mpmath at 40 digits.
constexpr Sample kScaledI[] = {
    {0, 0.1, 0.90710092578230109},     {0.5, 1, 0.34495131388824463},     {1, 2.5, 0.20658464953126655},
    {2.7, 10, 0.08724080903781057},    {0, 29.9, 0.073269219046001908},   {0, 30.1, 0.073023294131060942},
    {3.5, 45, 0.051972098395912548},   {10, 80, 0.023837427191441782},    {0.25, 500, 0.017844590060663243},
    {-0.5, 0.3, 1.1281011481981859},   {-0.3, 2, 0.30279932966305298},    {-0.3, 40, 0.06320621825484737},
    {25, 5, 4.9014022408036993e-18},   {1, 1e-08, 4.9999999500000004e-9}, {60, 120, 1.4108617830286293e-8},
};

constexpr Sample kJ[] = {
    {0, 1, 0.76519768655796655},   {1, 3, 0.33905895852593646},     {2.5, 7.2, -0.29771611478367851},
    {0, 25, 0.096266783275958116}, {5, 2, 0.0070396297558716855},   {0.5, 40, 0.094000962389533578},
    {3, 100, 0.076284201720331943}, {12, 15, 0.23666584405476806},
};

}  // namespace

TEST(BesselIScaled, MatchesReferenceValues) {
  for (const auto& s : kScaledI) {
    EXPECT_NEAR(bessel_i_scaled(s.nu, s.x), s.expected, 1e-12 * std::abs(s.expected))
        << "nu=" << s.nu << " x=" << s.x;
  }
}

TEST(BesselIScaled, ValuesAtOrigin) {
  EXPECT_DOUBLE_EQ(bessel_i_scaled(0.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(bessel_i_scaled(1.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(bessel_i_scaled(3.5, 0.0), 0.0);
  EXPECT_TRUE(std::isinf(bessel_i_scaled(-0.25, 0.0)));
}

TEST(BesselIScaled, HalfIntegerClosedForm) {
  const double expected = std::exp(-1.0) * std::sqrt(2.0 / std::numbers::pi) * std::sinh(1.0);
  EXPECT_NEAR(bessel_i_scaled(0.5, 1.0), expected, 1e-15);
  EXPECT_NEAR(bessel_i_scaled(0.5, 1.0), 0.344951, 1e-6);
}

TEST(BesselIScaled, RejectsOutOfDomain) {
  EXPECT_THROW(bessel_i_scaled(-0.6, 1.0), DomainError);
  EXPECT_THROW(bessel_i_scaled(0.0, -1.0), DomainError);
  EXPECT_THROW(bessel_i_scaled(std::nan(""), 1.0), DomainError);
}

TEST(BesselIScaled, ContinuousAcrossSeriesAsymptoticSwitch) {
  for (double nu : {0.0, 0.5, 2.0, 7.5}) {
    const double below = bessel_i_scaled(nu, 30.0 - 1e-12);
    const double above = bessel_i_scaled(nu, 30.0 + 1e-12);
    EXPECT_NEAR(below, above, 1e-12 * below) << nu;
  }
}

TEST(BesselIScaled, NoOverflowForHugeArguments) {
  const double v = bessel_i_scaled(1.5, 1e8);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(v, 1.0 / std::sqrt(2.0 * std::numbers::pi * 1e8), 1e-12);
}

TEST(BesselIScaledProperty, MonotoneNonincreasingInOrder) {
  for (double x : {0.01, 0.3, 1.0, 4.0, 12.0, 29.0, 31.0, 75.0, 400.0}) {
    double prev = bessel_i_scaled(0.0, x);
    for (double nu = 0.25; nu <= 20.0; nu += 0.25) {
      const double cur = bessel_i_scaled(nu, x);
      EXPECT_LE(cur, prev * (1.0 + 1e-13)) << "x=" << x << " nu=" << nu;
      prev = cur;
    }
  }
}

TEST(BesselIScaledProperty, ThreeTermRecurrence) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> nu_dist(0.5, 15.0);
  std::uniform_real_distribution<double> logx_dist(-2.0, 2.7);
  for (int k = 0; k < 400; ++k) {
    const double nu = nu_dist(rng);
    const double x = std::pow(10.0, logx_dist(rng));
    const double lhs = bessel_i_scaled(nu - 1.0, x) - bessel_i_scaled(nu + 1.0, x);
    const double rhs = 2.0 * nu / x * bessel_i_scaled(nu, x);
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(rhs))) << "nu=" << nu << " x=" << x;
  }
}

TEST(BesselJ, MatchesReferenceValues) {
  for (const auto& s : kJ) {
    EXPECT_NEAR(bessel_j(s.nu, s.x), s.expected, 1e-12) << "nu=" << s.nu << " x=" << s.x;
  }
}

TEST(BesselJ, SpecialPoints) {
  EXPECT_DOUBLE_EQ(bessel_j(0.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(bessel_j(2.0, 0.0), 0.0);
  EXPECT_NEAR(bessel_j(0.5, std::numbers::pi), 0.0, 1e-15);
  EXPECT_NEAR(bessel_j(0.0, 2.404826), 0.0, 1e-6);
  EXPECT_NEAR(bessel_j(0.0, 2.4048255576957728), 0.0, 1e-15);
}

TEST(BesselJ, RejectsOutOfDomain) {
  EXPECT_THROW(bessel_j(-1.0, 1.0), DomainError);
  EXPECT_THROW(bessel_j(1.0, -1.0), DomainError);
}

TEST(BesselJ, DerivativeMatchesReference) {
  EXPECT_NEAR(bessel_j_prime(2.0, 4.5), -0.32788220245041312, 1e-12);
  EXPECT_NEAR(bessel_j_prime(0.0, 3.0), -0.33905895852593646, 1e-12);
}

TEST(LaplaceBesselI, ConeParameterization) {
  const double c = 0.5;
  const double p = (c * c + 1.0) / 4.0, a = c / 2.0;
  EXPECT_NEAR(laplace_bessel_i(p, a, 0.0), 16.0 / 3.0, 1e-13);
  EXPECT_NEAR(laplace_bessel_i(p, a, 1.0), 8.0 / 3.0, 1e-13);
  const double c2 = 2.0;
  EXPECT_NEAR(laplace_bessel_i((c2 * c2 + 1.0) / 4.0, c2 / 2.0, 1.0), 2.0 / 3.0, 1e-13);
}

TEST(LaplaceBesselI, MatchesReferenceQuadrature) {
  EXPECT_NEAR(laplace_bessel_i(1.0, 0.3, 0.7), 0.28237513389107479, 1e-14);
  EXPECT_NEAR(laplace_bessel_i(2.0, 1.9, 2.5), 0.71406104132120305, 1e-14);
  EXPECT_NEAR(laplace_bessel_i(0.6, 0.2, -0.4), 3.5780430297278696, 1e-13);
  EXPECT_NEAR(laplace_bessel_i_over_u(1.0, 0.3, 0.7), 0.38481244246293572, 1e-14);
  EXPECT_NEAR(laplace_bessel_i_over_u(2.0, 1.9, 2.5), 0.17837239095140764, 1e-14);
  EXPECT_NEAR(laplace_bessel_i_over_u(1.25, 1.0, 1.0), 0.5, 1e-15);
}

TEST(LaplaceBesselI, ZeroFrequencyHandledAnalytically) {
  EXPECT_DOUBLE_EQ(laplace_bessel_i(2.0, 0.0, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(laplace_bessel_i(2.0, 0.0, 1.5), 0.0);
}

TEST(LaplaceBesselI, RejectsDivergentParameters) {
  EXPECT_THROW(laplace_bessel_i(1.0, 1.0, 0.0), DomainError);
  EXPECT_THROW(laplace_bessel_i(1.0, 2.0, 0.0), DomainError);
  EXPECT_THROW(laplace_bessel_i(1.0, 0.5, -1.0), DomainError);
  EXPECT_THROW(laplace_bessel_i_over_u(1.0, 0.5, 0.0), DomainError);
}
