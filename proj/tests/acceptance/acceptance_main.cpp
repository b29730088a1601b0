// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>

#include "conelef/checks.hpp"

int main(int argc, char** argv) {
  conelef::CheckSettings settings;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--seed") settings.seed = std::strtoull(argv[i + 1], nullptr, 10);
  }

  int failures = 0;
  std::cout << std::setprecision(3);
  for (const auto& r : conelef::run_checks(conelef::check_names(), settings)) {
    std::cout << r.id << ' ' << (r.passed ? "PASS" : "FAIL") << ' ' << r.name << "  measured=" << r.measured
              << " tolerance=" << r.tolerance << " time=" << r.seconds << "s/" << r.budget_seconds << "s";
    if (!r.detail.empty()) std::cout << "  " << r.detail;
    std::cout << '\n';
    if (!r.passed) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
