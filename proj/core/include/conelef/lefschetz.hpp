#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conelef/conekernels.hpp"
#include "conelef/fixedpoints.hpp"

namespace conelef {

enum class Extension { Max, Min };
enum class ComplexKind { DeRham, Short };
enum class ZetaMethod { ClosedForm, Quadrature, TExtrapolation };

std::string_view to_string(Extension e);
std::string_view to_string(ComplexKind k);
std::string_view to_string(ZetaMethod m);

struct ZetaValue {
  double value = 0.0;
  double error = 0.0;
  double tail_bound = 0.0;
  ZetaMethod method = ZetaMethod::ClosedForm;
};

struct LefschetzOptions {
  QuadratureSpec quad{};
  double radius_b = 2.0;
  /// Lower limit of the Mellin integral in the heat time.
  double mellin_cutoff = 1e-6;
  int extrapolation_order = 2;
  /// Use the Mellin quadrature even where closed forms exist.
  bool force_quadrature = false;
  /// Attach the topological and Witt comparisons to reports.
  bool cross_checks = true;
};

struct Problem {
  ComplexKind complex = ComplexKind::DeRham;
  int dimension = 2;  ///< m + 1
  std::vector<RegularFixedPoint> regular_points;
  std::vector<SingularFixedPoint> singular_points;
  LefschetzOptions options{};

  /// Throws DomainError on inconsistent dimensions, spectra or complex kinds.
  void validate() const;
};

struct RegularEntry {
  std::string name;
  FixedPointClass cls = FixedPointClass::RegularSimple;
  double determinant = 0.0;
  double contribution = 0.0;
};

struct SingularEntry {
  std::string name;
  FixedPointClass cls = FixedPointClass::SingularAttractive;
  std::vector<double> per_degree;
  std::vector<double> per_degree_error;
  double total = 0.0;
  double error = 0.0;  ///< quadrature error plus spectral tail bounds
  ZetaMethod method = ZetaMethod::ClosedForm;
};

struct LefschetzReport {
  Extension extension = Extension::Max;
  ComplexKind complex = ComplexKind::DeRham;
  std::vector<RegularEntry> regular;
  double regular_sum = 0.0;
  std::vector<SingularEntry> singular;
  double total = 0.0;
  double error = 0.0;
  std::optional<double> topological_check;
  std::optional<double> discrepancy;
  bool witt = false;
  /// |total(min) - total(max)|, attached to min reports of Witt de Rham problems.
  std::optional<double> witt_discrepancy;
};

/// Sum of the t -> 0 limits of all Cheeger types in degree 0.
ZetaValue zeta_derham_degree0(const SingularFixedPoint& q, const LefschetzOptions& opts = {});

/// All Cheeger types in degree i = 0..m+1. Witt links only: there the maximal
/// and minimal extensions share their kernels.
ZetaValue zeta_derham(const SingularFixedPoint& q, int degree, Extension ext, const LefschetzOptions& opts = {});

/// Degree 0 or 1 of the short complex. The minimal extension uses p^+ / p^-;
/// the maximal one the same orders at -lambda.
ZetaValue zeta_short_complex(const SingularFixedPoint& q, int degree, Extension ext = Extension::Min,
                             const LefschetzOptions& opts = {});

/// (1/2) int_cutoff^inf dx/x of the graph trace at radius 1 and time x.
/// At c = 1 the spectral sum is also re-evaluated on half the blocks and a
/// mismatch is reported as non-convergence.
ZetaValue zeta_general(const SingularFixedPoint& q, int degree, Extension ext, const LefschetzOptions& opts = {});

LefschetzReport assemble(const Problem& problem, Extension ext);

struct Extrapolation {
  double value = 0.0;
  double error = 0.0;
  int order = 0;
  std::size_t points_used = 0;
};

/// Polynomial (Richardson) extrapolation of v(t) to t = 0 through the
/// order + 1 smallest t. The error is the change from order - 1.
/// Throws NonConvergenceError with fewer than 3 points.
Extrapolation richardson_to_zero(const std::vector<double>& t, const std::vector<double>& v, int order);

struct SweepOptions {
  std::vector<CheegerType> types{CheegerType::One, CheegerType::Two, CheegerType::Three, CheegerType::Four};
  std::optional<int> only_degree;
  /// Sweep the links' own de Rham complexes instead of the cones.
  bool closed_model = false;
  LambdaMethod lambda_method = LambdaMethod::Weber;
};

struct SweepRow {
  double t = 0.0;
  int degree = 0;
  CheegerType type = CheegerType::One;
  TraceValue trace;
  double supertrace_partial = 0.0;
};

struct SweepResult {
  HeatTraceTable table;
  std::vector<SweepRow> rows;  ///< ordered by t, degree, type
  std::vector<double> t_grid;
  std::vector<double> supertrace;
  std::vector<bool> converged;
  std::optional<Extrapolation> limit;
  std::string limit_failure;
  bool all_converged = true;
};

/// Per-t, per-degree, per-type traces summed over the singular points, the
/// alternating sum (offset by the regular contributions) and its t -> 0
/// extrapolation. Short-complex kernels are reported as type 1.
SweepResult sweep_supertrace(const Problem& problem, const std::vector<double>& t_grid, Extension ext,
                             const SweepOptions& opts = {});

/// n points from t_max down to t_min, geometrically spaced, returned increasing.
std::vector<double> geometric_grid(double t_min, double t_max, int points);

}  // namespace conelef
