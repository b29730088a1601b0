#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "conelef/errors.hpp"
#include "conelef/fixedpoints.hpp"

using namespace conelef;

namespace {

Eigen::MatrixXd rotation_scaling(double c, double alpha) {
  Eigen::MatrixXd j(2, 2);
  j << c * std::cos(alpha), -c * std::sin(alpha), c * std::sin(alpha), c * std::cos(alpha);
  return j;
}

SingularFixedPoint vertex(double c, double displacement) {
  return {"q", c, displacement, circle_spectrum(displacement, 5)};
}

}  // namespace

TEST(ClassifyRegular, Examples) {
  RegularFixedPoint zero{"p", Eigen::MatrixXd::Zero(2, 2), std::nullopt};
  EXPECT_EQ(classify_regular(zero), FixedPointClass::RegularSimple);
  EXPECT_DOUBLE_EQ(regular_simplicity(zero).determinant, 1.0);

  RegularFixedPoint id{"p", Eigen::MatrixXd::Identity(2, 2), std::nullopt};
  EXPECT_EQ(classify_regular(id), FixedPointClass::NotSimple);
  EXPECT_FALSE(regular_simplicity(id).diagnostic.empty());

  RegularFixedPoint rs{"p", rotation_scaling(0.5, std::numbers::pi / 3.0), std::nullopt};
  EXPECT_EQ(classify_regular(rs), FixedPointClass::RegularSimple);
  EXPECT_NEAR(regular_simplicity(rs).determinant, 0.75, 1e-15);
}

TEST(ClassifyRegular, BorderlineIsNotSimple) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Identity(2, 2);
  j(0, 0) = 1.0 - 1e-15;
  EXPECT_EQ(classify_regular({"p", j, std::nullopt}), FixedPointClass::NotSimple);
}

TEST(ClassifyRegular, RejectsNonSquare) {
  EXPECT_THROW(classify_regular({"p", Eigen::MatrixXd::Zero(2, 3), std::nullopt}), DomainError);
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2, 2);
  j(1, 1) = std::nan("");
  EXPECT_THROW(classify_regular({"p", j, std::nullopt}), DomainError);
}

TEST(ClassifySingular, Examples) {
  EXPECT_EQ(classify_singular(vertex(0.5, 1.0)), FixedPointClass::SingularAttractive);
  EXPECT_EQ(classify_singular(vertex(1.0, 0.0)), FixedPointClass::NotSimple);
  EXPECT_EQ(classify_singular(vertex(2.0, 0.0)), FixedPointClass::SingularRepulsive);
  EXPECT_EQ(classify_singular(vertex(1.0, 0.5)), FixedPointClass::SingularRotational);
  EXPECT_THROW(classify_singular(vertex(0.0, 0.5)), DomainError);
}

TEST(ClassifySingularProperty, InverseSwapsAttractiveAndRepulsive) {
  for (double c : {0.1, 0.5, 0.99, 1.01, 3.0}) {
    const auto a = classify_singular(vertex(c, 0.7));
    const auto b = classify_singular(vertex(1.0 / c, 0.7));
    EXPECT_NE(a, b);
    EXPECT_TRUE((a == FixedPointClass::SingularAttractive && b == FixedPointClass::SingularRepulsive) ||
                (a == FixedPointClass::SingularRepulsive && b == FixedPointClass::SingularAttractive));
  }
}

TEST(RegularContribution, General) {
  RegularFixedPoint p{"p", Eigen::MatrixXd::Zero(1, 1), std::vector<double>{1.0, -1.0}};
  p.jacobian(0, 0) = -1.0;
  EXPECT_DOUBLE_EQ(regular_contribution_general(p), 1.0);
  p.endo_traces = std::vector<double>{0.0, 0.0};
  EXPECT_DOUBLE_EQ(regular_contribution_general(p), 0.0);
}

TEST(RegularContribution, GeneralErrors) {
  RegularFixedPoint missing{"p", Eigen::MatrixXd::Zero(2, 2), std::nullopt};
  EXPECT_THROW(regular_contribution_general(missing), MissingDataError);
  RegularFixedPoint id{"p", Eigen::MatrixXd::Identity(2, 2), std::vector<double>{1.0, 2.0, 1.0}};
  EXPECT_THROW(regular_contribution_general(id), NotSimpleError);
}

TEST(RegularContribution, DeRham) {
  EXPECT_EQ(regular_contribution_derham({"p", Eigen::MatrixXd::Zero(2, 2), std::nullopt}), 1);
  EXPECT_EQ(regular_contribution_derham({"p", Eigen::MatrixXd::Constant(1, 1, 2.0), std::nullopt}), -1);
  EXPECT_EQ(regular_contribution_derham({"p", rotation_scaling(0.5, std::numbers::pi / 3.0), std::nullopt}), 1);
  EXPECT_THROW(regular_contribution_derham({"p", Eigen::MatrixXd::Identity(3, 3), std::nullopt}), NotSimpleError);
}

TEST(ExteriorPowers, TwoByTwo) {
  Eigen::MatrixXd j(2, 2);
  j << 1.0, 2.0, 3.0, 4.0;
  EXPECT_EQ(exterior_power_traces(j), (std::vector<double>{1.0, 5.0, -2.0}));
}

TEST(ExteriorPowersProperty, AlternatingSumIsCharacteristicDeterminant) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> entry(-2.0, 2.0);
  for (int n : {2, 3, 4}) {
    for (int k = 0; k < 50; ++k) {
      Eigen::MatrixXd j(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) j(r, c) = entry(rng);
      const auto tr = exterior_power_traces(j.transpose());
      double alt = 0.0;
      for (std::size_t i = 0; i < tr.size(); ++i) alt += (i % 2 == 0 ? 1.0 : -1.0) * tr[i];
      const double det = (Eigen::MatrixXd::Identity(n, n) - j).determinant();
      EXPECT_NEAR(alt, det, 1e-12 * std::max(1.0, std::abs(det)));
      if (std::abs(det) > 1e-6) {
        RegularFixedPoint p{"p", j, tr};
        EXPECT_EQ(std::llround(regular_contribution_general(p)), regular_contribution_derham(p));
      }
    }
  }
}

TEST(FixedPointClass, Names) {
  EXPECT_EQ(to_string(FixedPointClass::SingularRotational), "SingularRotational");
  EXPECT_EQ(to_string(FixedPointClass::NotSimple), "NotSimple");
}
