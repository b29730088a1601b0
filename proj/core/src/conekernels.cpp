#include "conelef/conekernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "conelef/errors.hpp"

namespace conelef {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kWynnTerms = 9;

double radial_p(double c) { return (c * c + 1.0) / 4.0; }

double term_limit(const RadialTerm& term, double c) {
  const double p = radial_p(c);
  const double a = c / 2.0;
  return term.over_u ? laplace_bessel_i_over_u(p, a, term.order) : laplace_bessel_i(p, a, term.order);
}

double tail_bound(const RadialSeries& s, double c) {
  if (s.last_block_weight == 0.0 || s.max_abs_trace == 0.0) return 0.0;
  if (c == 1.0) return kInf;
  const double rho = std::min(c, 1.0 / c);
  return s.max_abs_trace * s.last_block_weight * rho / (1.0 - rho);
}

void require_positive_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("heat time t must be positive and finite");
}

// Accumulates the terms of consecutive spectral blocks. Each block is first
// built with unit trace so that its weight is available for the tail bound.
class SeriesBuilder {
 public:
  explicit SeriesBuilder(double c) : c_(c) {}

  void begin_block() { block_.clear(); }
  void add(double coef, double order, bool over_u = false) {
    if (coef != 0.0) block_.push_back({coef, order, over_u});
  }
  void end_block(double trace, bool truncatable) {
    if (block_.empty()) return;
    for (const auto& t : block_) series_.terms.push_back({t.coef * trace, t.order, t.over_u});
    series_.block_ends.push_back(series_.terms.size());
    series_.max_abs_trace = std::max(series_.max_abs_trace, std::abs(trace));
    if (truncatable) {
      double w = 0.0;
      if (c_ == 1.0) {
        w = kInf;
      } else {
        for (const auto& t : block_) w += std::abs(t.coef * term_limit(t, c_));
      }
      series_.last_block_weight = w;
    }
  }
  RadialSeries take() { return std::move(series_); }

 private:
  double c_;
  std::vector<RadialTerm> block_;
  RadialSeries series_;
};

void require_type_degree(CheegerType type, int degree) {
  if (degree < 0) throw DegreeError("degree must be non-negative");
  if ((type == CheegerType::Two || type == CheegerType::Three) && degree < 1) {
    throw DegreeError("forms of type 2 and 3 do not occur in degree 0");
  }
  if (type == CheegerType::Four && degree < 2) throw DegreeError("forms of type 4 occur only in degree >= 2");
}

// Types 2 and 3 by quadrature of the Gaussian-damped lambda integral, after
// lambda r -> s, followed by quadrature in r.
TraceValue type23_direct(bool type2, int degree, double t, const ScalingMap& map, const ConeGeometry& geom,
                         const QuadratureSpec& quad) {
  const double c = map.c;
  const int m = map.spectrum.link_dim;
  const double sign = type2 ? 1.0 : -1.0;
  TraceValue out;

  QuadratureSpec inner_spec = quad;
  inner_spec.first_panel = std::numbers::pi;

  for (const auto& block : map.spectrum.coexact(degree - 1)) {
    if (block.mu == 0.0 && !type2) continue;
    const auto ex = cheeger_exponents(degree - 1, m, block.mu);
    const double a = ex.a;
    const double nu = ex.nu;
    const double mu = block.mu;

    auto bracket = [&](double s) {
      const double y1 = c * s;
      const double y2 = s;
      const double j1 = bessel_j(nu, y1);
      const double j2 = bessel_j(nu, y2);
      const double p1 = sign * a * j1 + y1 * bessel_j_prime(nu, y1);
      const double p2 = sign * a * j2 + y2 * bessel_j_prime(nu, y2);
      return p1 * p2 + mu * j1 * j2;
    };
    auto inner = [&](double r) {
      if (r <= 0.0) return 0.0;
      const double damp = t / (r * r);
      auto f = [&](double s) { return s > 0.0 ? std::exp(-damp * s * s) * bracket(s) / s : 0.0; };
      const auto res = integrate_panels(f, kInf, inner_spec);
      if (!res.converged) out.converged = false;
      return res.value / r;
    };
    const auto outer = integrate_finite(inner, 0.0, geom.radius_b, quad);
    if (!outer.converged) out.converged = false;
    const double scale = block.pullback_trace * std::pow(c, a);
    out.value += scale * outer.value;
    // Converged inner integrals are accurate to rel_tol, which carries through the outer integral.
    out.error += std::abs(scale) * (outer.error + quad.rel_tol * std::abs(outer.value));
  }
  const RadialSeries s = cheeger_series(type2 ? CheegerType::Two : CheegerType::Three, degree, map);
  out.tail_bound = tail_bound(s, c);
  return out;
}

double bessel_order_sum(const RadialSeries& series, double z, double weight_u, double inv_u) {
  double sum = 0.0;
  for (const auto& term : series.terms) {
    double v = term.coef * detail::bessel_i_scaled_unchecked(term.order, z);
    if (term.over_u) v *= inv_u;
    sum += v;
  }
  return sum * weight_u;
}

}  // namespace

void ConeGeometry::validate() const {
  if (link_dim < 0) throw DomainError("link dimension must be non-negative");
  if (!(radius_b > 0.0) || !std::isfinite(radius_b)) throw DomainError("cone radius b must be positive");
}

void ScalingMap::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("scaling factor c must be positive");
  const auto issues = blocking_violations(spectrum);
  if (!issues.empty()) throw DomainError("invalid link spectrum: " + issues.front());
}

ConeExponents cheeger_exponents(int degree, int link_dim, double mu) {
  const double a = 0.5 * (1.0 + 2.0 * degree - link_dim);
  const double s = mu + a * a;
  if (s < 0.0) throw DomainError("mu + a^2 must be non-negative");
  return {a, std::sqrt(s)};
}

double p_plus(double lambda) { return std::abs(lambda + 0.5); }

double p_minus(double lambda) { return std::abs(lambda) >= 0.5 ? std::abs(lambda - 0.5) : lambda - 0.5; }

bool cheeger_type_present(CheegerType type, int degree, int link_dim) {
  switch (type) {
    case CheegerType::One:
      return degree >= 0 && degree <= link_dim;
    case CheegerType::Two:
    case CheegerType::Three:
      return degree >= 1 && degree <= link_dim + 1;
    case CheegerType::Four:
      return degree >= 2 && degree <= link_dim + 1;
  }
  return false;
}

RadialSeries cheeger_series(CheegerType type, int degree, const ScalingMap& map) {
  require_type_degree(type, degree);
  const double c = map.c;
  const int m = map.spectrum.link_dim;
  SeriesBuilder b(c);

  switch (type) {
    case CheegerType::One:
      for (const auto& block : map.spectrum.coexact(degree)) {
        const auto ex = cheeger_exponents(degree, m, block.mu);
        b.begin_block();
        b.add(std::pow(c, ex.a) / 4.0, ex.nu);
        b.end_block(block.pullback_trace, block.mu > 0.0);
      }
      break;
    case CheegerType::Two:
    case CheegerType::Three: {
      const double sign = type == CheegerType::Two ? 1.0 : -1.0;
      for (const auto& block : map.spectrum.coexact(degree - 1)) {
        const auto ex = cheeger_exponents(degree - 1, m, block.mu);
        const double ca = std::pow(c, ex.a);
        b.begin_block();
        if (block.mu > 0.0) {
          b.add(ca * c / 8.0, ex.nu - 1.0);
          b.add(ca * c / 8.0, ex.nu + 1.0);
          b.add(sign * ca * ex.a / 2.0, ex.nu, true);
        } else if (type == CheegerType::Two) {
          // Harmonic phi: only d(r^a phi)-type forms survive, with the order
          // shifted towards zero.
          b.add(ca * c / 4.0, ex.a > 0.0 ? ex.a - 1.0 : std::abs(ex.a) + 1.0);
        }
        b.end_block(block.pullback_trace, block.mu > 0.0);
      }
      break;
    }
    case CheegerType::Four: {
      const double a_prev = cheeger_exponents(degree - 1, m, 0.0).a;
      const double weight = std::pow(c, a_prev + 1.0) / 4.0;
      for (const auto& block : map.spectrum.coexact(degree - 2)) {
        if (block.mu == 0.0) continue;
        b.begin_block();
        b.add(weight, cheeger_exponents(degree - 2, m, block.mu).nu);
        b.end_block(block.pullback_trace, true);
      }
      break;
    }
  }
  return b.take();
}

RadialSeries short_complex_series(double c, const ShortComplexSpectrum& sc, ShortLaplacian which) {
  if (!(c > 0.0)) throw DomainError("scaling factor c must be positive");
  if (sc.weight_nu != 1.0) {
    throw DomainError("short-complex heat kernels are implemented for weight 1 cone operators only");
  }
  SeriesBuilder b(c);
  const double pref = std::pow(c, 0.5 * (1.0 - sc.link_dim)) / 4.0;
  for (const auto& block : sc.lambdas) {
    b.begin_block();
    b.add(pref, which == ShortLaplacian::PdagP ? p_plus(block.lambda) : p_minus(block.lambda));
    b.end_block(block.pullback_trace, false);
  }
  return b.take();
}

TraceValue radial_trace(const RadialSeries& series, double c, double upper, const QuadratureSpec& quad) {
  TraceValue out;
  out.tail_bound = tail_bound(series, c);
  if (series.terms.empty()) return out;
  const double decay = (1.0 - c) * (1.0 - c) / 4.0;
  auto f = [&](double u) {
    if (u <= 0.0) return 0.0;
    return bessel_order_sum(series, c * u / 2.0, std::exp(-decay * u), 1.0 / u);
  };
  const auto res = integrate_panels(f, upper, quad);
  out.value = res.value;
  out.error = res.error;
  out.converged = res.converged;
  return out;
}

TraceValue radial_limit(const RadialSeries& series, double c) {
  if (c == 1.0) throw DomainError("closed-form limits diverge for c = 1");
  TraceValue out;
  out.tail_bound = tail_bound(series, c);
  double err = 0.0;
  std::vector<double> partial;
  partial.reserve(series.block_ends.size());
  std::size_t next_end = 0;
  for (std::size_t k = 0; k < series.terms.size(); ++k) {
    const double v = series.terms[k].coef * term_limit(series.terms[k], c);
    out.value += v;
    err += std::abs(v);
    if (next_end < series.block_ends.size() && series.block_ends[next_end] == k + 1) {
      partial.push_back(out.value);
      ++next_end;
    }
  }
  out.error = err * 4.0 * std::numeric_limits<double>::epsilon();

  // Accelerate only when the omitted blocks matter at working precision.
  if (out.tail_bound > 1e-13 * std::max(std::abs(out.value), err) && partial.size() >= kWynnTerms + 6) {
    std::optional<SeriesLimit> best;
    for (std::size_t step = 1; step <= 6; ++step) {
      std::vector<double> sub;
      for (std::size_t k = 0; k < kWynnTerms; ++k) sub.push_back(partial[partial.size() - 1 - (kWynnTerms - 1 - k) * step]);
      const auto est = wynn_epsilon(sub);
      if (std::isfinite(est.value) && std::isfinite(est.error) && (!best || est.error < best->error)) best = est;
      if (best && best->error < 1e-14 * std::abs(best->value)) break;
    }
    if (best && best->error < out.tail_bound) {
      out.value = best->value;
      out.tail_bound = best->error + 64.0 * std::numeric_limits<double>::epsilon() * std::abs(best->value);
    }
  }
  return out;
}

SeriesLimit wynn_epsilon(const std::vector<double>& s) {
  const std::size_t n = s.size();
  if (n == 0) throw DomainError("wynn_epsilon: empty sequence");
  SeriesLimit best{s.back(), kInf};
  // Vanishing increments (e.g. blocks with zero trace) break the recursion.
  double scale = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) scale = std::max(scale, std::abs(s[j + 1] - s[j]));
  for (std::size_t j = 0; j + 1 < n; ++j) {
    if (std::abs(s[j + 1] - s[j]) <= 1e-10 * scale) return best;
  }
  std::vector<double> prev(n + 1, 0.0);
  std::vector<double> cur = s;
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> next(n - k);
    for (std::size_t j = 0; j + 1 < cur.size(); ++j) {
      const double d = cur[j + 1] - cur[j];
      if (d == 0.0) return best;
      next[j] = prev[j + 1] + 1.0 / d;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (k % 2 == 0 && cur.size() >= 2) {
      const double spread = std::abs(cur[cur.size() - 1] - cur[cur.size() - 2]);
      if (std::isfinite(spread) && spread < best.error) best = {cur.back(), spread};
    }
  }
  return best;
}

double radial_mellin_density(const RadialSeries& series, double c, double x) {
  if (x <= 0.0 || series.terms.empty()) return 0.0;
  const double g = std::exp(-(1.0 - c) * (1.0 - c) / (4.0 * x)) / (2.0 * x);
  if (g == 0.0) return 0.0;
  double sum = 0.0;
  const double z = c / (2.0 * x);
  for (const auto& term : series.terms) {
    double v = 4.0 * term.coef * detail::bessel_i_scaled_unchecked(term.order, z);
    if (term.over_u) v *= x;
    sum += v;
  }
  return sum * g;
}

TraceValue cheeger_trace(CheegerType type, int degree, double t, const ScalingMap& map, const ConeGeometry& geom,
                         const KernelOptions& opts) {
  require_positive_t(t);
  require_type_degree(type, degree);
  if (!(map.c > 0.0)) throw DomainError("scaling factor c must be positive");
  geom.validate();
  if (opts.lambda_method == LambdaMethod::Direct && (type == CheegerType::Two || type == CheegerType::Three)) {
    return type23_direct(type == CheegerType::Two, degree, t, map, geom, opts.quad);
  }
  const double upper = geom.radius_b * geom.radius_b / t;
  return radial_trace(cheeger_series(type, degree, map), map.c, upper, opts.quad);
}

TraceValue type1_trace(int degree, double t, const ScalingMap& map, const ConeGeometry& geom,
                       const KernelOptions& opts) {
  return cheeger_trace(CheegerType::One, degree, t, map, geom, opts);
}
TraceValue type2_trace(int degree, double t, const ScalingMap& map, const ConeGeometry& geom,
                       const KernelOptions& opts) {
  return cheeger_trace(CheegerType::Two, degree, t, map, geom, opts);
}
TraceValue type3_trace(int degree, double t, const ScalingMap& map, const ConeGeometry& geom,
                       const KernelOptions& opts) {
  return cheeger_trace(CheegerType::Three, degree, t, map, geom, opts);
}
TraceValue type4_trace(int degree, double t, const ScalingMap& map, const ConeGeometry& geom,
                       const KernelOptions& opts) {
  return cheeger_trace(CheegerType::Four, degree, t, map, geom, opts);
}

TraceValue cheeger_limit(CheegerType type, int degree, const ScalingMap& map) {
  if (!(map.c > 0.0)) throw DomainError("scaling factor c must be positive");
  return radial_limit(cheeger_series(type, degree, map), map.c);
}

TraceValue short_complex_diag_trace(double t, double c, const ShortComplexSpectrum& sc, ShortLaplacian which,
                                    const ConeGeometry& geom, const KernelOptions& opts) {
  require_positive_t(t);
  geom.validate();
  const double upper = geom.radius_b * geom.radius_b / t;
  return radial_trace(short_complex_series(c, sc, which), c, upper, opts.quad);
}

double graph_kernel_density(CheegerType type, int degree, double t, double r, const ScalingMap& map) {
  require_positive_t(t);
  require_type_degree(type, degree);
  if (type != CheegerType::One && type != CheegerType::Four) {
    throw DomainError("graph kernel density is available for types 1 and 4");
  }
  const double c = map.c;
  const int m = map.spectrum.link_dim;
  const double z = c * r * r / (2.0 * t);
  const double common = std::exp(-(1.0 - c) * (1.0 - c) * r * r / (4.0 * t)) / (2.0 * t);
  double sum = 0.0;
  if (type == CheegerType::One) {
    for (const auto& block : map.spectrum.coexact(degree)) {
      const auto ex = cheeger_exponents(degree, m, block.mu);
      sum += block.pullback_trace * std::pow(c * r * r, ex.a) * std::pow(r, -2.0 * degree) *
             bessel_i_scaled(ex.nu, z);
    }
  } else {
    const double a_prev = cheeger_exponents(degree - 1, m, 0.0).a;
    for (const auto& block : map.spectrum.coexact(degree - 2)) {
      if (block.mu == 0.0) continue;
      const double nu = cheeger_exponents(degree - 2, m, block.mu).nu;
      sum += block.pullback_trace * c * std::pow(c * r * r, a_prev) * std::pow(r, -2.0 * (degree - 1)) *
             bessel_i_scaled(nu, z);
    }
  }
  return sum * common;
}

double scaling_identity_residual(int degree, double t, double r, double lambda_scale, const ScalingMap& map,
                                 const ConeGeometry& geom, CheegerType type) {
  geom.validate();
  if (!(r > 0.0) || !(lambda_scale > 0.0)) throw DomainError("radius and scale must be positive");
  const int m = map.spectrum.link_dim;
  const double direct = graph_kernel_density(type, degree, t, r, map);
  const double scaled = std::pow(lambda_scale, -(m + 1.0)) *
                        graph_kernel_density(type, degree, t / (lambda_scale * lambda_scale), r / lambda_scale, map);
  return std::abs(direct - scaled) / std::max(1.0, std::abs(direct));
}

double closed_model_supertrace(const LinkSpectrum& spectrum, double t) {
  require_positive_t(t);
  double total = 0.0;
  for (int i = 0; i <= spectrum.link_dim; ++i) {
    double degree_sum = 0.0;
    for (const auto& block : spectrum.full_spectrum(i)) degree_sum += std::exp(-t * block.mu) * block.pullback_trace;
    total += (i % 2 == 0) ? degree_sum : -degree_sum;
  }
  return total;
}

const TraceValue* HeatTraceTable::find(double t, int degree, CheegerType type) const {
  auto it = entries.find(HeatTraceKey{t, degree, type});
  return it == entries.end() ? nullptr : &it->second;
}

}  // namespace conelef
