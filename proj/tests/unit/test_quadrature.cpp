#include <gtest/gtest.h>

#include <cmath>

#include "conelef/errors.hpp"
#include "conelef/specfun.hpp"

using namespace conelef;

TEST(Quadrature, Exponential) {
  const auto r = integrate_semiinfinite([](double u) { return std::exp(-u); }, {});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
}

TEST(Quadrature, Gaussian) {
  const auto r = integrate_semiinfinite([](double u) { return u * std::exp(-u * u); }, {});
  EXPECT_NEAR(r.value, 0.5, 1e-12);
}

TEST(Quadrature, InverseSqrtEndpoint) {
  const auto r = integrate_semiinfinite([](double u) { return std::exp(-u) / std::sqrt(u); }, {});
  EXPECT_NEAR(r.value, std::sqrt(std::acos(-1.0)), 1e-10);
}

TEST(Quadrature, ConeLaplaceIntegrand) {
  const double c = 0.5;
  const auto f = [c](double u) {
    return std::exp(-u * (c * c + 1.0) / 4.0 + c * u / 2.0) * bessel_i_scaled(0.0, c * u / 2.0);
  };
  const auto r = integrate_semiinfinite(f, {});
  EXPECT_NEAR(r.value, 16.0 / 3.0, 1e-8 * 16.0 / 3.0);
}

TEST(Quadrature, FiniteInterval) {
  QuadratureSpec spec;
  const auto r = integrate_finite([](double x) { return std::sin(x); }, 0.0, std::acos(-1.0), spec);
  EXPECT_NEAR(r.value, 2.0, 1e-13);
  EXPECT_GT(r.evaluations, 0u);
}

TEST(Quadrature, PanelsWithFiniteUpperLimit) {
  const auto r = integrate_panels([](double u) { return std::exp(-u); }, 3.0, {});
  EXPECT_NEAR(r.value, 1.0 - std::exp(-3.0), 1e-12);
}

TEST(Quadrature, LowerCutoff) {
  QuadratureSpec spec;
  spec.lower_cutoff = 1.0;
  const auto r = integrate_semiinfinite([](double u) { return std::exp(-u); }, spec);
  EXPECT_NEAR(r.value, std::exp(-1.0), 1e-12);
}

TEST(Quadrature, MassAwayFromCutoffIsFound) {
  // 2 K_0(2); negligible on the first panels, so an early quiet stop would return 0.
  QuadratureSpec spec;
  spec.lower_cutoff = 1e-6;
  spec.first_panel = 1e-6;
  const auto r = integrate_semiinfinite([](double x) { return std::exp(-1.0 / x - x) / x; }, spec);
  EXPECT_NEAR(r.value, 0.22778774549906687, 1e-9);
}

TEST(Quadrature, NonConvergenceIsReported) {
  QuadratureSpec spec;
  spec.max_panels = 4;
  EXPECT_THROW(integrate_semiinfinite([](double u) { return 1.0 / (1.0 + u); }, spec), NonConvergenceError);
}

TEST(QuadratureSpecValidation, RejectsBadFields) {
  QuadratureSpec spec;
  spec.rel_tol = 0.0;
  EXPECT_THROW(spec.validate(), DomainError);
  spec = {};
  spec.abs_tol = -1.0;
  EXPECT_THROW(spec.validate(), DomainError);
  spec = {};
  spec.max_subdivisions = 0;
  EXPECT_THROW(spec.validate(), DomainError);
  spec = {};
  spec.lower_cutoff = -1e-3;
  EXPECT_THROW(spec.validate(), DomainError);
  EXPECT_NO_THROW(QuadratureSpec{}.validate());
}

TEST(QuadratureProperty, LaplaceOracleGrid) {
  for (double p : {0.4, 1.0, 2.5}) {
    for (double frac : {0.0, 0.3, 0.8}) {
      for (double nu : {0.0, 0.5, 1.0, 2.5}) {
        const double a = frac * p;
        const auto f = [=](double u) { return std::exp(-(p - a) * u) * bessel_i_scaled(nu, a * u); };
        const double exact = laplace_bessel_i(p, a, nu);
        if (exact == 0.0) continue;
        const auto r = integrate_semiinfinite(f, {});
        EXPECT_LT(std::abs(r.value - exact) / exact, 1e-8) << p << ' ' << a << ' ' << nu;
      }
    }
  }
}
