#pragma once

#include <ostream>

#include "conelef/errors.hpp"

namespace conelef::cli {

template <class F>
int guarded(F&& command, std::ostream& err) {
  try {
    return command();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NotSimpleError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNotSimple;
  } catch (const NonConvergenceError& e) {
    err << "error: no convergence: " << e.what() << " (best value " << e.value() << ", error estimate "
        << e.error_estimate() << ")\n";
    return kExitNonConvergence;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DegreeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const MissingDataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitVerifyFailed;
  }
}

}  // namespace conelef::cli
