#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "conelef/linkspec.hpp"

namespace conelef {

enum class FixedPointClass {
  RegularSimple,
  SingularAttractive,
  SingularRepulsive,
  SingularRotational,
  NotSimple,
};

std::string_view to_string(FixedPointClass cls);

/// Interior fixed point q with Jacobian d_q f in local coordinates.
struct RegularFixedPoint {
  std::string name;
  Eigen::MatrixXd jacobian;
  /// Tr(phi_i) per degree for general complexes; derived from the Jacobian for de Rham.
  std::optional<std::vector<double>> endo_traces;
};

/// Conical vertex q with f = (c r, B(p)) nearby.
struct SingularFixedPoint {
  std::string name;
  double c = 0.5;
  /// min over p of dist(B(p), p); zero when B has a fixed point.
  double link_map_displacement = 0.0;
  std::variant<LinkSpectrum, ShortComplexSpectrum> spectrum;

  int link_dim() const;
  bool is_derham() const { return std::holds_alternative<LinkSpectrum>(spectrum); }
};

struct Simplicity {
  bool simple = false;
  double determinant = 0.0;  ///< det(I - J)
  double threshold = 0.0;
  std::string diagnostic;
};

/// det(I - J) against the threshold 1e-12 ||I - J||_F^{m+1}.
Simplicity regular_simplicity(const RegularFixedPoint& p);

FixedPointClass classify_regular(const RegularFixedPoint& p);
FixedPointClass classify_singular(const SingularFixedPoint& q);

/// Tr(Lambda^i J) for i = 0..n, as sums of principal i x i minors.
std::vector<double> exterior_power_traces(const Eigen::MatrixXd& jacobian);

/// sum_i (-1)^i Tr(phi_i) / |det(I - J)|.
double regular_contribution_general(const RegularFixedPoint& p);

/// sgn det(I - J).
int regular_contribution_derham(const RegularFixedPoint& p);

}  // namespace conelef
