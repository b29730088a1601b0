#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "conelef/lefschetz.hpp"

namespace conelef::cli {

struct CircleLink {
  double alpha = 0.0;
  std::optional<int> K;  ///< falls back to numerics.K

  bool operator==(const CircleLink&) const = default;
};

using LinkDescriptor = std::variant<CircleLink, LinkSpectrum, ShortComplexSpectrum>;

struct SingularDescriptor {
  std::string name;
  double c = 0.5;
  std::optional<double> displacement;  ///< derived from alpha for circle links
  LinkDescriptor link;

  bool operator==(const SingularDescriptor&) const = default;
};

struct RegularDescriptor {
  std::string name;
  std::vector<std::vector<double>> jacobian;
  std::optional<std::vector<double>> endo_traces;

  bool operator==(const RegularDescriptor&) const = default;
};

struct Numerics {
  double rel_tol = 1e-10;
  int K = 60;
  double t_min = 0.0125;
  double t_max = 0.4;
  int points = 6;
  double radius_b = 2.0;
  int extrapolation_order = 2;
  double mellin_cutoff = 1e-6;
  std::optional<double> check_tolerance;
  bool closed_model = false;
  LambdaMethod lambda_method = LambdaMethod::Weber;

  bool operator==(const Numerics&) const = default;
};

struct ProblemConfig {
  ComplexKind complex = ComplexKind::DeRham;
  std::string extension = "max";  ///< max, min or both
  int dimension = 2;
  std::vector<SingularDescriptor> singular_points;
  std::vector<RegularDescriptor> regular_points;
  Numerics numerics;
  std::vector<std::string> checks;  ///< canonical check names

  /// Fixed points found non-simple while parsing; not a schema error.
  std::vector<std::string> non_simple;
  /// Accepted but suspicious input, e.g. |pullback trace| above multiplicity.
  std::vector<std::string> warnings;

  bool operator==(const ProblemConfig&) const = default;
};

/// Schema violations, each prefixed with a JSON pointer or a line:column.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

ProblemConfig parse_config(std::string_view text);
std::string serialize_config(const ProblemConfig& config);
ProblemConfig load_config(const std::string& path);

Problem to_problem(const ProblemConfig& config);
std::vector<Extension> extensions_of(std::string_view extension);

}  // namespace conelef::cli
