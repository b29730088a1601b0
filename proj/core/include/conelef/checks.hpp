#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conelef/lefschetz.hpp"

namespace conelef {

struct CheckSettings {
  std::uint64_t seed = 20240611;
  /// Replaces the default tolerance of every check.
  std::optional<double> tolerance;
  int truncation_K = 60;
  /// Scopes the supertrace and independence checks to a concrete problem.
  std::optional<Problem> problem;
  bool enforce_runtime = true;
};

struct CheckResult {
  std::string id;    ///< A1..A8
  std::string name;  ///< e.g. laplace_oracle
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string detail;
};

/// Canonical names in A1..A8 order.
const std::vector<std::string>& check_names();

/// Accepts canonical names and the ids A1..A8 (case-insensitive).
std::optional<std::string> canonical_check_name(std::string_view name);

CheckResult run_check(std::string_view name, const CheckSettings& settings = {});
std::vector<CheckResult> run_checks(const std::vector<std::string>& names, const CheckSettings& settings = {});

/// The cone over the circle with a rotation by alpha scaled by c.
Problem circle_vertex_problem(double c, double alpha, int K);

}  // namespace conelef
