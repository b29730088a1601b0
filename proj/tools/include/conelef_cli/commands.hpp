#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "conelef/checks.hpp"
#include "conelef/lefschetz.hpp"
#include "conelef_cli/config.hpp"

namespace conelef::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitNonConvergence = 2,
  kExitNotSimple = 3,
  kExitUsage = 64,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Command-line overrides; unset fields keep the config's values.
struct CliOptions {
  std::optional<std::string> extension;
  std::optional<double> t_min;
  std::optional<double> t_max;
  std::optional<int> points;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;  ///< csv or json
  std::optional<std::string> output;
  bool quiet = false;
};

/// Applies overrides and checks the t grid; throws UsageError.
ProblemConfig apply_overrides(ProblemConfig config, const CliOptions& opts);

/// Shortest round-trip decimal, independent of the global locale.
std::string format_number(double x);

std::string report_json(const ProblemConfig& config, const std::vector<LefschetzReport>& reports);
std::string sweep_csv(const SweepResult& sweep);
std::string sweep_json(const SweepResult& sweep, Extension ext);
std::string checks_json(const std::vector<CheckResult>& results);

int cmd_compute(const ProblemConfig& config, const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const ProblemConfig& config, const CliOptions& opts, std::ostream& out, std::ostream& err);
/// Without a config every check runs with its built-in settings.
int cmd_verify(const std::optional<ProblemConfig>& config, const CliOptions& opts, std::ostream& out,
               std::ostream& err);

/// Runs a command, mapping library exceptions onto exit codes.
template <class F>
int guarded(F&& command, std::ostream& err);

}  // namespace conelef::cli

#include "conelef_cli/guarded.ipp"
