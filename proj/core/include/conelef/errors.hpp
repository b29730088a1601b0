#pragma once

#include <stdexcept>
#include <string>

namespace conelef {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Quadrature, series or extrapolation failed to reach the requested tolerance.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double value, double error_estimate)
      : std::runtime_error(what), value_(value), error_(error_estimate) {}
  explicit NonConvergenceError(const std::string& what)
      : NonConvergenceError(what, 0.0, 0.0) {}

  /// Best value reached before giving up.
  double value() const noexcept { return value_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double value_;
  double error_;
};

/// A fixed point violates the transversality (simplicity) requirement.
class NotSimpleError : public std::runtime_error {
 public:
  NotSimpleError(const std::string& point, const std::string& why)
      : std::runtime_error("fixed point '" + point + "' is not simple: " + why), point_(point) {}
  const std::string& point() const noexcept { return point_; }

 private:
  std::string point_;
};

/// Required spectral or cohomological data is absent.
class MissingDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested Cheeger form type does not exist in the requested degree.
class DegreeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace conelef
