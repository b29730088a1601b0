#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "conelef/checks.hpp"
#include "conelef/errors.hpp"
#include "conelef/lefschetz.hpp"

using namespace conelef;

namespace {

constexpr double kPi = std::numbers::pi;

SingularFixedPoint circle_vertex(double c, double alpha, int K = 60) {
  return {"q", c, circle_displacement(alpha), circle_spectrum(alpha, K)};
}

SingularFixedPoint short_vertex(double c, double lambda, double trace = 1.0) {
  return {"q", c, 0.5, ShortComplexSpectrum{{{lambda, trace, 1}}, 1, 1.0}};
}

}  // namespace

TEST(ZetaDerham, DegreeZeroClosedForms) {
  EXPECT_NEAR(zeta_derham_degree0(circle_vertex(0.5, kPi)).value, 4.0 / 9.0, 1e-8);
  EXPECT_NEAR(zeta_derham_degree0(circle_vertex(2.0, kPi / 2.0)).value, 0.2, 1e-8);
  EXPECT_NEAR(zeta_derham_degree0(circle_vertex(0.5, 0.0)).value, 4.0, 1e-8);
}

TEST(ZetaDerham, MethodAndTailBound) {
  const auto z = zeta_derham_degree0(circle_vertex(0.5, 1.0, 20));
  EXPECT_EQ(z.method, ZetaMethod::ClosedForm);
  EXPECT_GT(z.tail_bound, 0.0);
  EXPECT_LT(z.tail_bound, 1e-4);
}

TEST(ZetaDerham, DegreesSumToTopologicalValue) {
  for (double c : {0.3, 0.5, 0.8}) {
    for (double alpha : {0.0, 1.0, kPi}) {
      const auto q = circle_vertex(c, alpha);
      double alt = 0.0;
      for (int i = 0; i <= 2; ++i) alt += (i % 2 == 0 ? 1.0 : -1.0) * zeta_derham(q, i, Extension::Max).value;
      EXPECT_NEAR(alt, 1.0, 1e-8) << c << ' ' << alpha;
    }
  }
}

TEST(ZetaDerham, RejectsBadDegreeAndComplex) {
  EXPECT_THROW(zeta_derham(circle_vertex(0.5, 1.0), 3, Extension::Max), DegreeError);
  EXPECT_THROW(zeta_derham(circle_vertex(0.5, 1.0), -1, Extension::Max), DegreeError);
  EXPECT_THROW(zeta_derham_degree0(short_vertex(0.5, 0.0)), DomainError);
}

TEST(ZetaShortComplex, Examples) {
  EXPECT_NEAR(zeta_short_complex(short_vertex(0.25, 0.0), 0).value, 8.0 / 15.0, 1e-12);
  EXPECT_NEAR(zeta_short_complex(short_vertex(0.25, 0.0), 1).value, 32.0 / 15.0, 1e-12);
  EXPECT_NEAR(zeta_short_complex(short_vertex(0.5, 1.0), 0).value, std::pow(0.5, 1.5) / 0.75, 1e-12);
  EXPECT_NEAR(zeta_short_complex(short_vertex(0.5, 1.0), 0).value, 0.471405, 1e-6);
}

TEST(ZetaShortComplex, RejectsBadDegree) {
  EXPECT_THROW(zeta_short_complex(short_vertex(0.5, 0.0), 2), DegreeError);
  EXPECT_THROW(zeta_short_complex(circle_vertex(0.5, 1.0), 0), DomainError);
}

TEST(ZetaShortComplexProperty, AdjointDuality) {
  // Adjoint problem: c -> 1/c, weighted by c^{-(n+1)}.
  for (double c : {0.25, 0.5, 0.8, 2.0}) {
    for (double lambda : {-1.3, 0.0, 0.2, 1.0}) {
      for (int deg : {0, 1}) {
        const double direct = zeta_short_complex(short_vertex(c, lambda), deg).value;
        const double adjoint = zeta_short_complex(short_vertex(1.0 / c, lambda), deg).value;
        EXPECT_NEAR(std::pow(c, -2.0) * adjoint, direct, 1e-6 * std::abs(direct)) << c << ' ' << lambda << ' ' << deg;
      }
    }
  }
}

TEST(ZetaShortComplexProperty, MaximalIsMinimalAtReflectedSpectrum) {
  for (double lambda : {-1.3, -0.2, 0.0, 0.7}) {
    for (int deg : {0, 1}) {
      EXPECT_DOUBLE_EQ(zeta_short_complex(short_vertex(0.4, lambda), deg, Extension::Max).value,
                       zeta_short_complex(short_vertex(0.4, -lambda), deg, Extension::Min).value);
    }
  }
}

TEST(ZetaGeneral, AgreesWithClosedForms) {
  const auto q = circle_vertex(0.5, kPi);
  EXPECT_NEAR(zeta_general(q, 0, Extension::Max).value, 4.0 / 9.0, 1e-5);
  EXPECT_EQ(zeta_general(q, 0, Extension::Max).method, ZetaMethod::Quadrature);
  const auto sq = short_vertex(0.25, 0.0);
  EXPECT_NEAR(zeta_general(sq, 0, Extension::Min).value, 8.0 / 15.0, 1e-5);
  EXPECT_NEAR(zeta_general(sq, 1, Extension::Min).value, 32.0 / 15.0, 1e-5);
}

TEST(ZetaGeneralProperty, AllDegreesAgree) {
  for (double c : {0.4, 2.5}) {
    const auto q = circle_vertex(c, 1.2);
    for (int i = 0; i <= 2; ++i) {
      EXPECT_NEAR(zeta_general(q, i, Extension::Max).value, zeta_derham(q, i, Extension::Max).value, 1e-5)
          << c << ' ' << i;
    }
  }
}

TEST(ZetaGeneral, EmptySpectrumIsZero) {
  LinkSpectrum s;
  s.link_dim = 1;
  s.harmonic_dims = {{0, 1}, {1, 1}};
  s.harmonic_traces = {{0, 1.0}, {1, 1.0}};
  s.blocks_by_degree[0] = {};
  const SingularFixedPoint q{"q", 0.5, 0.3, s};
  EXPECT_EQ(zeta_general(q, 0, Extension::Max).value, 0.0);
}

TEST(ZetaGeneral, RotationalCircleDoesNotSettle) {
  // Rotation traces 2 cos(k alpha) are not absolutely summable at c = 1.
  EXPECT_THROW(zeta_general(circle_vertex(1.0, kPi, 60), 0, Extension::Max), NonConvergenceError);
}

TEST(ZetaGeneral, RotationalWithSummableTraces) {
  LinkSpectrum s = circle_spectrum(0.0, 30);
  for (std::size_t k = 1; k < s.blocks_by_degree[0].size(); ++k) {
    s.blocks_by_degree[0][k].pullback_trace = 2.0 * std::pow(0.3, static_cast<double>(k));
  }
  Problem p;
  p.singular_points.push_back({"q", 1.0, 0.5, s});
  const auto r = assemble(p, Extension::Max);
  EXPECT_EQ(r.singular.at(0).cls, FixedPointClass::SingularRotational);
  EXPECT_EQ(r.singular.at(0).method, ZetaMethod::Quadrature);
  // Per-degree values depend on the Mellin cutoff; the alternating sum does not.
  EXPECT_NEAR(r.total, 1.0, 5e-3);
}

TEST(ZetaProperty, RadiusIndependence) {
  LefschetzOptions b1, b2;
  b1.radius_b = 1.0;
  b2.radius_b = 2.0;
  for (double c : {0.3, 0.6}) {
    const auto q = circle_vertex(c, 0.9);
    for (int i = 0; i <= 2; ++i) {
      EXPECT_NEAR(zeta_derham(q, i, Extension::Max, b1).value, zeta_derham(q, i, Extension::Max, b2).value, 1e-8);
    }
  }
}

TEST(Assemble, CircleVertexMatchesTopology) {
  Problem p;
  p.singular_points.push_back(circle_vertex(0.5, kPi / 3.0));
  const auto r = assemble(p, Extension::Max);
  ASSERT_TRUE(r.topological_check.has_value());
  EXPECT_DOUBLE_EQ(*r.topological_check, 1.0);
  EXPECT_NEAR(r.total, 1.0, 1e-8);
  ASSERT_TRUE(r.discrepancy.has_value());
  EXPECT_LT(*r.discrepancy, 1e-8);
  EXPECT_TRUE(r.witt);
  EXPECT_EQ(r.singular.at(0).per_degree.size(), 3u);
}

TEST(Assemble, EmptyProblem) {
  const auto r = assemble(Problem{}, Extension::Max);
  EXPECT_EQ(r.total, 0.0);
  EXPECT_EQ(r.regular_sum, 0.0);
}

TEST(Assemble, SingleRegularPoint) {
  Problem p;
  p.regular_points.push_back({"p", Eigen::MatrixXd::Zero(2, 2), std::nullopt});
  const auto r = assemble(p, Extension::Max);
  EXPECT_EQ(r.total, 1.0);
  EXPECT_EQ(r.regular.at(0).contribution, 1.0);
}

TEST(Assemble, TotalIsSumOfParts) {
  Problem p;
  p.singular_points.push_back(circle_vertex(0.4, 0.7));
  p.singular_points.push_back(circle_vertex(3.0, 2.0));
  p.singular_points.back().name = "q2";
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2, 2);
  j(0, 0) = 2.0;
  p.regular_points.push_back({"p", j, std::nullopt});
  for (auto ext : {Extension::Max, Extension::Min}) {
    const auto r = assemble(p, ext);
    double sum = r.regular_sum;
    for (const auto& s : r.singular) sum += s.total;
    EXPECT_EQ(r.total, sum);
    EXPECT_EQ(r.regular_sum, -1.0);
  }
}

TEST(Assemble, WittMaxMinAgree) {
  Problem p;
  p.singular_points.push_back(circle_vertex(0.6, 1.4));
  const auto mx = assemble(p, Extension::Max);
  const auto mn = assemble(p, Extension::Min);
  EXPECT_NEAR(mx.total, mn.total, mx.error + mn.error + 1e-12);
  ASSERT_TRUE(mn.witt_discrepancy.has_value());
  EXPECT_FALSE(mn.topological_check.has_value());
}

TEST(Assemble, CrossChecksCanBeDisabled) {
  Problem p;
  p.singular_points.push_back(circle_vertex(0.6, 1.4));
  p.options.cross_checks = false;
  EXPECT_FALSE(assemble(p, Extension::Max).topological_check.has_value());
  EXPECT_FALSE(assemble(p, Extension::Min).witt_discrepancy.has_value());
}

TEST(Assemble, RepulsivePointHasNoTopologicalCheck) {
  Problem p;
  p.singular_points.push_back(circle_vertex(2.0, 1.0));
  EXPECT_FALSE(assemble(p, Extension::Max).topological_check.has_value());
}

TEST(Assemble, NotSimpleRaises) {
  Problem p;
  p.regular_points.push_back({"bad", Eigen::MatrixXd::Identity(2, 2), std::nullopt});
  EXPECT_THROW(assemble(p, Extension::Max), NotSimpleError);
  Problem q;
  q.singular_points.push_back(circle_vertex(1.0, 0.0));
  EXPECT_THROW(assemble(q, Extension::Max), NotSimpleError);
}

TEST(Assemble, ShortComplex) {
  Problem p;
  p.complex = ComplexKind::Short;
  p.singular_points.push_back(short_vertex(0.25, 0.0));
  p.regular_points.push_back({"p", Eigen::MatrixXd::Zero(2, 2), std::vector<double>{1.0, 0.5}});
  const auto r = assemble(p, Extension::Min);
  EXPECT_NEAR(r.singular.at(0).total, 8.0 / 15.0 - 32.0 / 15.0, 1e-10);
  EXPECT_NEAR(r.regular_sum, 0.5, 1e-15);
}

TEST(ProblemValidation, Inconsistencies) {
  Problem p;
  p.dimension = 3;
  p.singular_points.push_back(circle_vertex(0.5, 1.0));
  EXPECT_THROW(p.validate(), DomainError);
  Problem q;
  q.complex = ComplexKind::Short;
  q.singular_points.push_back(circle_vertex(0.5, 1.0));
  EXPECT_THROW(q.validate(), DomainError);
  Problem r;
  r.regular_points.push_back({"p", Eigen::MatrixXd::Zero(3, 3), std::nullopt});
  EXPECT_THROW(r.validate(), DomainError);
}

TEST(Richardson, ExactForPolynomials) {
  const std::vector<double> t{0.1, 0.2, 0.4, 0.8};
  std::vector<double> v;
  for (double x : t) v.push_back(3.0 + 2.0 * x - 5.0 * x * x);
  const auto e = richardson_to_zero(t, v, 2);
  EXPECT_NEAR(e.value, 3.0, 1e-12);
  EXPECT_EQ(e.points_used, 3u);
  EXPECT_EQ(e.order, 2);
}

TEST(Richardson, ErrorIsChangeFromLowerOrder) {
  const std::vector<double> t{0.1, 0.2, 0.4};
  const std::vector<double> v{1.1, 1.4, 2.2};
  const auto e = richardson_to_zero(t, v, 2);
  const auto e1 = richardson_to_zero(t, v, 1);
  EXPECT_NEAR(e.error, std::abs(e.value - e1.value), 1e-15);
}

TEST(Richardson, TooFewPoints) {
  EXPECT_THROW(richardson_to_zero({0.1, 0.2}, {1.0, 1.0}, 1), NonConvergenceError);
}

TEST(GeometricGrid, Spacing) {
  const auto g = geometric_grid(0.0125, 0.4, 6);
  ASSERT_EQ(g.size(), 6u);
  EXPECT_DOUBLE_EQ(g.front(), 0.0125);
  EXPECT_DOUBLE_EQ(g.back(), 0.4);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i] / g[i - 1], 2.0, 1e-12);
  EXPECT_THROW(geometric_grid(0.4, 0.1, 5), DomainError);
  EXPECT_THROW(geometric_grid(0.1, 0.4, 1), DomainError);
}

TEST(Sweep, DegreeZeroFlatInTime) {
  Problem p;
  p.singular_points.push_back(circle_vertex(0.5, kPi));
  SweepOptions opts;
  opts.types = {CheegerType::One, CheegerType::Four};
  opts.only_degree = 0;
  const auto s = sweep_supertrace(p, {0.05, 0.1, 0.2}, Extension::Max, opts);
  ASSERT_EQ(s.rows.size(), 3u);
  // Finite-radius values from mpmath; the limit is 4/9.
  const double expected[] = {0.44444444444444444, 0.44444444436924898, 0.44443866342326486};
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(s.rows[i].trace.value, expected[i], 1e-12) << s.rows[i].t;
  EXPECT_NEAR(s.rows[1].trace.value, 4.0 / 9.0, 1e-6);
  EXPECT_NE(s.table.find(0.1, 0, CheegerType::One), nullptr);
}

TEST(Sweep, ClosedModelConstant) {
  Problem p;
  p.singular_points.push_back(circle_vertex(0.5, kPi / 3.0));
  SweepOptions opts;
  opts.closed_model = true;
  const auto s = sweep_supertrace(p, geometric_grid(0.05, 2.0, 6), Extension::Max, opts);
  for (double v : s.supertrace) EXPECT_NEAR(v, 0.0, 1e-9);
}

TEST(Sweep, SupertraceExtrapolatesToLefschetzNumber) {
  Problem p;
  p.singular_points.push_back(circle_vertex(0.5, kPi / 3.0));
  const auto s = sweep_supertrace(p, geometric_grid(0.0125, 0.4, 6), Extension::Max);
  EXPECT_TRUE(s.all_converged);
  ASSERT_TRUE(s.limit.has_value());
  EXPECT_NEAR(s.limit->value, 1.0, 1e-4);
  EXPECT_NEAR(s.supertrace.front(), 1.0, 1e-4);
}

TEST(Sweep, Errors) {
  Problem p;
  p.singular_points.push_back(circle_vertex(0.5, 1.0));
  EXPECT_THROW(sweep_supertrace(p, {}, Extension::Max), DomainError);
  EXPECT_THROW(sweep_supertrace(p, {0.2, 0.1}, Extension::Max), DomainError);
  EXPECT_THROW(sweep_supertrace(p, {-0.1, 0.1}, Extension::Max), DomainError);
}

TEST(EnumNames, Strings) {
  EXPECT_EQ(to_string(Extension::Max), "max");
  EXPECT_EQ(to_string(ComplexKind::Short), "short");
  EXPECT_EQ(to_string(ZetaMethod::TExtrapolation), "t_extrapolation");
}
