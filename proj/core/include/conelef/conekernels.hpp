#pragma once

#include <compare>
#include <map>
#include <vector>

#include "conelef/linkspec.hpp"
#include "conelef/specfun.hpp"

namespace conelef {

/// Truncated model cone C_b(L) with metric dr^2 + r^2 h.
struct ConeGeometry {
  int link_dim = 1;
  double radius_b = 2.0;

  void validate() const;
};

/// f(r, p) = (c r, B(p)) near the vertex; B enters only through the spectrum.
struct ScalingMap {
  double c = 0.5;
  LinkSpectrum spectrum;

  void validate() const;
};

enum class CheegerType : int { One = 1, Two = 2, Three = 3, Four = 4 };

/// Which Laplacian of the short complex 0 -> E0 -P-> E1 -> 0.
enum class ShortLaplacian {
  PdagP,  ///< P^dag_max P_min on degree 0, Bessel order p^+(lambda)
  PPdag,  ///< P_min P^dag_max on degree 1, Bessel order p^-(lambda)
};

/// Evaluation route for the lambda integrals of types 2 and 3.
enum class LambdaMethod {
  Weber,   ///< reduced exactly to Bessel-I radial integrals
  Direct,  ///< Gaussian-damped Bessel-J quadrature in lambda, then in r
};

struct ConeExponents {
  double a = 0.0;
  double nu = 0.0;
};

/// a(i) = (1 + 2i - m)/2 and nu = sqrt(mu + a(i)^2).
ConeExponents cheeger_exponents(int degree, int link_dim, double mu);

double p_plus(double lambda);
double p_minus(double lambda);

struct TraceValue {
  double value = 0.0;
  double error = 0.0;       ///< quadrature error estimate
  double tail_bound = 0.0;  ///< bound on the omitted spectral blocks beyond truncation
  bool converged = true;
};

struct KernelOptions {
  QuadratureSpec quad{};
  LambdaMethod lambda_method = LambdaMethod::Weber;
};

/// One summand  coef * int e^{-u (c^2+1)/4} I_order(c u / 2) w(u) du  with
/// w = 1 or w = 1/u, after the substitution u = r^2/t.
struct RadialTerm {
  double coef = 0.0;
  double order = 0.0;
  bool over_u = false;
};

/// A trace as a finite sum of radial terms plus the bookkeeping needed for a
/// spectral tail bound.
struct RadialSeries {
  std::vector<RadialTerm> terms;
  /// Sum over the terms of the last truncated block of |coef/trace| times the
  /// limit of its integral; zero when no block was truncated.
  double last_block_weight = 0.0;
  double max_abs_trace = 0.0;
  /// One past the last term of each spectral block, in block order.
  std::vector<std::size_t> block_ends;
};

/// Whether the Cheeger type has any kernel in this degree (ignoring spectral data).
bool cheeger_type_present(CheegerType type, int degree, int link_dim);

RadialSeries cheeger_series(CheegerType type, int degree, const ScalingMap& map);
RadialSeries short_complex_series(double c, const ShortComplexSpectrum& sc, ShortLaplacian which);

/// Sum of the terms integrated over u in (0, upper]; upper = b^2/t.
TraceValue radial_trace(const RadialSeries& series, double c, double upper, const QuadratureSpec& quad);
/// The same sum over (0, inf), in closed form. Requires c != 1.
/// When the truncated blocks are not negligible, the block partial sums are
/// extrapolated with Wynn's epsilon algorithm and tail_bound becomes the
/// extrapolation error estimate.
TraceValue radial_limit(const RadialSeries& series, double c);

/// Wynn epsilon estimate of the limit of a sequence of partial sums, with the
/// spread between consecutive even-column entries as error estimate.
struct SeriesLimit {
  double value = 0.0;
  double error = 0.0;
};
SeriesLimit wynn_epsilon(const std::vector<double>& partial_sums);
/// Graph trace at radius 1 and time x, normalized so that
/// (1/2) int_0^inf density(x) dx/x equals radial_limit.
double radial_mellin_density(const RadialSeries& series, double c, double x);

TraceValue type1_trace(int degree, double t, const ScalingMap& map, const ConeGeometry& geom,
                       const KernelOptions& opts = {});
TraceValue type2_trace(int degree, double t, const ScalingMap& map, const ConeGeometry& geom,
                       const KernelOptions& opts = {});
TraceValue type3_trace(int degree, double t, const ScalingMap& map, const ConeGeometry& geom,
                       const KernelOptions& opts = {});
TraceValue type4_trace(int degree, double t, const ScalingMap& map, const ConeGeometry& geom,
                       const KernelOptions& opts = {});
TraceValue cheeger_trace(CheegerType type, int degree, double t, const ScalingMap& map,
                         const ConeGeometry& geom, const KernelOptions& opts = {});

/// t -> 0 limit of cheeger_trace; independent of the truncation radius.
TraceValue cheeger_limit(CheegerType type, int degree, const ScalingMap& map);

TraceValue short_complex_diag_trace(double t, double c, const ShortComplexSpectrum& sc, ShortLaplacian which,
                                    const ConeGeometry& geom, const KernelOptions& opts = {});

/// Pointwise trace density of the type-1 or type-4 kernel on the graph of f at
/// radius r, per unit r^m dr.
double graph_kernel_density(CheegerType type, int degree, double t, double r, const ScalingMap& map);

/// |k(t, r) - s^{-(m+1)} k(t/s^2, r/s)| / max(1, |k(t, r)|) for the type-1 or
/// type-4 graph kernel, s = lambda_scale.
double scaling_identity_residual(int degree, double t, double r, double lambda_scale, const ScalingMap& map,
                                 const ConeGeometry& geom, CheegerType type = CheegerType::One);

/// sum_i (-1)^i sum_blocks e^{-t mu} Tr(B^*) over the link's own de Rham complex.
double closed_model_supertrace(const LinkSpectrum& spectrum, double t);

struct HeatTraceKey {
  double t = 0.0;
  int degree = 0;
  CheegerType type = CheegerType::One;

  auto operator<=>(const HeatTraceKey&) const = default;
};

struct HeatTraceTable {
  std::map<HeatTraceKey, TraceValue> entries;

  const TraceValue* find(double t, int degree, CheegerType type) const;
};

}  // namespace conelef
