#include "conelef/lefschetz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "conelef/errors.hpp"
#include "conelef/parallel.hpp"

namespace conelef {
namespace {

constexpr CheegerType kAllTypes[] = {CheegerType::One, CheegerType::Two, CheegerType::Three, CheegerType::Four};

void require_simple(const SingularFixedPoint& q) {
  if (classify_singular(q) == FixedPointClass::NotSimple) {
    throw NotSimpleError(q.name, "c = 1 and the link map has a fixed point");
  }
}

const LinkSpectrum& link_spectrum(const SingularFixedPoint& q) {
  const auto* s = std::get_if<LinkSpectrum>(&q.spectrum);
  if (s == nullptr) throw DomainError("singular point '" + q.name + "' carries short-complex data, not a link spectrum");
  return *s;
}

const ShortComplexSpectrum& short_spectrum(const SingularFixedPoint& q) {
  const auto* s = std::get_if<ShortComplexSpectrum>(&q.spectrum);
  if (s == nullptr) throw DomainError("singular point '" + q.name + "' carries a link spectrum, not short-complex data");
  return *s;
}

void require_witt(const SingularFixedPoint& q, const LinkSpectrum& s) {
  if (!is_witt(s)) {
    throw DomainError("singular point '" + q.name +
                      "': middle-degree link cohomology is non-zero; the maximal and minimal de Rham "
                      "extensions differ there and are not implemented");
  }
}

void require_derham_degree(const LinkSpectrum& s, int degree) {
  if (degree < 0 || degree > s.link_dim + 1) {
    throw DegreeError("de Rham degree must lie in 0.." + std::to_string(s.link_dim + 1));
  }
}

// Radial series of every Cheeger type present in a de Rham degree, one per type.
std::vector<RadialSeries> derham_series(const ScalingMap& map, int degree) {
  std::vector<RadialSeries> out;
  for (auto type : kAllTypes) {
    if (cheeger_type_present(type, degree, map.spectrum.link_dim)) out.push_back(cheeger_series(type, degree, map));
  }
  return out;
}

RadialSeries concatenate(const std::vector<RadialSeries>& parts) {
  RadialSeries all;
  for (const auto& p : parts) {
    all.terms.insert(all.terms.end(), p.terms.begin(), p.terms.end());
    all.max_abs_trace = std::max(all.max_abs_trace, p.max_abs_trace);
    all.last_block_weight += p.last_block_weight;
  }
  return all;
}

ShortComplexSpectrum oriented(const ShortComplexSpectrum& sc, Extension ext) {
  if (ext == Extension::Min) return sc;
  ShortComplexSpectrum flipped = sc;
  for (auto& b : flipped.lambdas) b.lambda = -b.lambda;
  return flipped;
}

RadialSeries short_series(double c, const ShortComplexSpectrum& sc, int degree, Extension ext) {
  if (degree != 0 && degree != 1) throw DegreeError("the short complex has degrees 0 and 1 only");
  return short_complex_series(c, oriented(sc, ext), degree == 0 ? ShortLaplacian::PdagP : ShortLaplacian::PPdag);
}

LinkSpectrum halved(const LinkSpectrum& s) {
  LinkSpectrum h = s;
  for (auto& [deg, blocks] : h.blocks_by_degree) {
    std::vector<EigenBlock> kept;
    const auto positive = static_cast<std::size_t>(
        std::count_if(blocks.begin(), blocks.end(), [](const EigenBlock& b) { return b.mu > 0.0; }));
    std::size_t keep = (positive + 1) / 2;
    for (const auto& b : blocks) {
      if (b.mu == 0.0) {
        kept.push_back(b);
      } else if (keep > 0) {
        kept.push_back(b);
        --keep;
      }
    }
    blocks = std::move(kept);
  }
  h.truncation_K = std::max(1, (s.truncation_K + 1) / 2);
  return h;
}

ShortComplexSpectrum halved(const ShortComplexSpectrum& s) {
  ShortComplexSpectrum h = s;
  h.lambdas.resize((s.lambdas.size() + 1) / 2);
  return h;
}

ZetaValue mellin(const RadialSeries& series, double c, const LefschetzOptions& opts) {
  ZetaValue out;
  out.method = ZetaMethod::Quadrature;
  if (series.terms.empty()) return out;
  if (!(opts.mellin_cutoff > 0.0)) throw DomainError("Mellin cutoff must be positive");
  const double x0 = opts.mellin_cutoff;
  // x = x0 e^y turns dx/x into dy.
  auto f = [&](double y) { return radial_mellin_density(series, c, x0 * std::exp(y)); };
  QuadratureSpec spec = opts.quad;
  spec.lower_cutoff = 0.0;
  const auto r = integrate_semiinfinite(f, spec);
  out.value = 0.5 * r.value;
  out.error = 0.5 * (r.error + std::abs(f(0.0)));
  return out;
}

ZetaValue sum_limits(const std::vector<RadialSeries>& parts, double c) {
  ZetaValue out;
  for (const auto& p : parts) {
    const auto v = radial_limit(p, c);
    out.value += v.value;
    out.error += v.error;
    out.tail_bound += v.tail_bound;
  }
  return out;
}

// Mellin value at c = 1 cross-checked against half the spectral data.
template <class Build>
ZetaValue rotational(const Build& build_full, const Build& build_half, const LefschetzOptions& opts,
                     const std::string& name) {
  const auto full = mellin(build_full(), 1.0, opts);
  const auto half = mellin(build_half(), 1.0, opts);
  const double gap = std::abs(full.value - half.value);
  const double tol = std::max(1e-6, 1e-6 * std::abs(full.value));
  if (gap > tol) {
    std::ostringstream os;
    os << "singular point '" << name << "': at c = 1 the truncated spectral sum does not settle (value "
       << full.value << " vs " << half.value << " on half the blocks)";
    throw NonConvergenceError(os.str(), full.value, gap);
  }
  ZetaValue out = full;
  out.error += gap;
  return out;
}

double richardson_at_zero(const std::vector<double>& t, const std::vector<double>& v, std::size_t n) {
  // Neville's scheme evaluated at t = 0.
  std::vector<double> p(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = 0; i + k < n; ++i) {
      p[i] = (t[i + k] * p[i] - t[i] * p[i + 1]) / (t[i + k] - t[i]);
    }
  }
  return p[0];
}

TraceValue closed_model_degree(const LinkSpectrum& s, int degree, double t) {
  TraceValue v;
  double mu_max = 0.0;
  double max_trace = 0.0;
  for (const auto& b : s.full_spectrum(degree)) {
    v.value += std::exp(-t * b.mu) * b.pullback_trace;
    mu_max = std::max(mu_max, b.mu);
    max_trace = std::max(max_trace, std::abs(b.pullback_trace));
  }
  // Omitted eigenvalues assumed to grow at least like k^2 beyond the last one.
  if (mu_max > 0.0) v.tail_bound = max_trace * std::exp(-t * mu_max) / (2.0 * t * std::sqrt(mu_max));
  return v;
}

std::vector<RegularEntry> regular_entries(const Problem& problem) {
  std::vector<RegularEntry> out;
  for (const auto& p : problem.regular_points) {
    const auto simple = regular_simplicity(p);
    if (!simple.simple) throw NotSimpleError(p.name, simple.diagnostic);
    RegularEntry e{p.name, FixedPointClass::RegularSimple, simple.determinant, 0.0};
    e.contribution = problem.complex == ComplexKind::DeRham ? regular_contribution_derham(p)
                                                            : regular_contribution_general(p);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

std::string_view to_string(Extension e) { return e == Extension::Max ? "max" : "min"; }
std::string_view to_string(ComplexKind k) { return k == ComplexKind::DeRham ? "derham" : "short"; }
std::string_view to_string(ZetaMethod m) {
  switch (m) {
    case ZetaMethod::ClosedForm:
      return "closed_form";
    case ZetaMethod::Quadrature:
      return "quadrature";
    case ZetaMethod::TExtrapolation:
      return "t_extrapolation";
  }
  return "?";
}

void Problem::validate() const {
  if (dimension < 1) throw DomainError("dimension must be >= 1");
  options.quad.validate();
  if (!(options.radius_b > 0.0)) throw DomainError("radius_b must be positive");
  if (options.extrapolation_order < 1) throw DomainError("extrapolation order must be >= 1");
  for (const auto& p : regular_points) {
    if (p.jacobian.rows() != dimension || p.jacobian.cols() != dimension) {
      std::ostringstream os;
      os << "regular point '" << p.name << "': jacobian is " << p.jacobian.rows() << "x" << p.jacobian.cols()
         << " but the dimension is " << dimension;
      throw DomainError(os.str());
    }
    if (complex == ComplexKind::Short && !p.endo_traces) {
      throw MissingDataError("regular point '" + p.name + "' needs endomorphism traces for the short complex");
    }
  }
  for (const auto& q : singular_points) {
    if (q.link_dim() + 1 != dimension) {
      throw DomainError("singular point '" + q.name + "': link dimension " + std::to_string(q.link_dim()) +
                        " does not match dimension " + std::to_string(dimension));
    }
    if ((complex == ComplexKind::DeRham) != q.is_derham()) {
      throw DomainError("singular point '" + q.name + "' carries data for the wrong complex");
    }
    std::vector<std::string> issues =
        q.is_derham() ? blocking_violations(link_spectrum(q)) : conelef::validate(short_spectrum(q));
    if (!issues.empty()) throw DomainError("singular point '" + q.name + "': " + issues.front());
  }
}

ZetaValue zeta_derham_degree0(const SingularFixedPoint& q, const LefschetzOptions& opts) {
  return zeta_derham(q, 0, Extension::Max, opts);
}

ZetaValue zeta_derham(const SingularFixedPoint& q, int degree, Extension ext, const LefschetzOptions& opts) {
  require_simple(q);
  const auto& s = link_spectrum(q);
  require_derham_degree(s, degree);
  require_witt(q, s);
  if (q.c == 1.0 || opts.force_quadrature) return zeta_general(q, degree, ext, opts);
  return sum_limits(derham_series(ScalingMap{q.c, s}, degree), q.c);
}

ZetaValue zeta_short_complex(const SingularFixedPoint& q, int degree, Extension ext, const LefschetzOptions& opts) {
  require_simple(q);
  const auto& sc = short_spectrum(q);
  if (q.c == 1.0 || opts.force_quadrature) return zeta_general(q, degree, ext, opts);
  const auto v = radial_limit(short_series(q.c, sc, degree, ext), q.c);
  return {v.value, v.error, v.tail_bound, ZetaMethod::ClosedForm};
}

ZetaValue zeta_general(const SingularFixedPoint& q, int degree, Extension ext, const LefschetzOptions& opts) {
  require_simple(q);
  if (q.is_derham()) {
    const auto& s = link_spectrum(q);
    require_derham_degree(s, degree);
    require_witt(q, s);
    if (q.c == 1.0) {
      auto full = [&] { return concatenate(derham_series(ScalingMap{q.c, s}, degree)); };
      auto half = [&] { return concatenate(derham_series(ScalingMap{q.c, halved(s)}, degree)); };
      return rotational<std::function<RadialSeries()>>(full, half, opts, q.name);
    }
    const auto parts = derham_series(ScalingMap{q.c, s}, degree);
    ZetaValue v = mellin(concatenate(parts), q.c, opts);
    for (const auto& p : parts) v.tail_bound += radial_limit(p, q.c).tail_bound;
    return v;
  }
  const auto& sc = short_spectrum(q);
  if (q.c == 1.0) {
    auto full = [&] { return short_series(q.c, sc, degree, ext); };
    auto half = [&] { return short_series(q.c, halved(sc), degree, ext); };
    return rotational<std::function<RadialSeries()>>(full, half, opts, q.name);
  }
  return mellin(short_series(q.c, sc, degree, ext), q.c, opts);
}

LefschetzReport assemble(const Problem& problem, Extension ext) {
  problem.validate();
  LefschetzReport report;
  report.extension = ext;
  report.complex = problem.complex;

  report.regular = regular_entries(problem);
  for (const auto& e : report.regular) report.regular_sum += e.contribution;

  for (const auto& q : problem.singular_points) require_simple(q);

  report.singular.resize(problem.singular_points.size());
  parallel_for(problem.singular_points.size(), [&](std::size_t k) {
    const auto& q = problem.singular_points[k];
    SingularEntry e;
    e.name = q.name;
    e.cls = classify_singular(q);
    const int top = q.is_derham() ? q.link_dim() + 1 : 1;
    for (int i = 0; i <= top; ++i) {
      const ZetaValue z = q.is_derham() ? zeta_derham(q, i, ext, problem.options)
                                        : zeta_short_complex(q, i, ext, problem.options);
      e.per_degree.push_back(z.value);
      e.per_degree_error.push_back(z.error + z.tail_bound);
      e.total += (i % 2 == 0) ? z.value : -z.value;
      e.error += z.error + z.tail_bound;
      e.method = z.method;
    }
    report.singular[k] = std::move(e);
  });

  report.total = report.regular_sum;
  for (const auto& e : report.singular) {
    report.total += e.total;
    report.error += e.error;
  }

  if (problem.complex == ComplexKind::DeRham) {
    report.witt = std::all_of(problem.singular_points.begin(), problem.singular_points.end(),
                              [](const SingularFixedPoint& q) { return is_witt(link_spectrum(q)); }) ||
                  problem.dimension % 2 == 0;
    const bool all_attractive =
        std::all_of(report.singular.begin(), report.singular.end(),
                    [](const SingularEntry& e) { return e.cls == FixedPointClass::SingularAttractive; });
    if (problem.options.cross_checks && ext == Extension::Max && all_attractive) {
      double check = report.regular_sum;
      for (const auto& q : problem.singular_points) check += topological_singular_contribution(link_spectrum(q));
      report.topological_check = check;
      report.discrepancy = std::abs(report.total - check);
    }
    if (problem.options.cross_checks && ext == Extension::Min && report.witt) {
      report.witt_discrepancy = std::abs(report.total - assemble(problem, Extension::Max).total);
    }
  }
  return report;
}

Extrapolation richardson_to_zero(const std::vector<double>& t, const std::vector<double>& v, int order) {
  if (t.size() != v.size()) throw DomainError("richardson_to_zero: t and v differ in length");
  if (t.size() < 3) {
    throw NonConvergenceError("extrapolation needs at least 3 converged grid points, got " +
                              std::to_string(t.size()));
  }
  if (order < 1) throw DomainError("extrapolation order must be >= 1");
  std::vector<std::size_t> idx(t.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });
  std::vector<double> ts, vs;
  for (auto i : idx) {
    ts.push_back(t[i]);
    vs.push_back(v[i]);
  }
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (!(ts[i] > ts[i - 1])) throw DomainError("extrapolation grid has repeated t values");
  }
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(order) + 1, ts.size());
  Extrapolation out;
  out.order = static_cast<int>(n) - 1;
  out.points_used = n;
  out.value = richardson_at_zero(ts, vs, n);
  out.error = std::abs(out.value - richardson_at_zero(ts, vs, n - 1));
  return out;
}

std::vector<double> geometric_grid(double t_min, double t_max, int points) {
  if (!(t_min > 0.0) || !(t_max > t_min)) throw DomainError("geometric_grid needs 0 < t_min < t_max");
  if (points < 2) throw DomainError("geometric_grid needs at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double ratio = std::log(t_max / t_min) / (points - 1);
  for (int k = 0; k < points; ++k) grid[static_cast<std::size_t>(k)] = t_min * std::exp(ratio * k);
  grid.front() = t_min;
  grid.back() = t_max;
  return grid;
}

SweepResult sweep_supertrace(const Problem& problem, const std::vector<double>& t_grid, Extension ext,
                             const SweepOptions& opts) {
  problem.validate();
  if (t_grid.empty()) throw DomainError("sweep needs a non-empty t grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || !std::isfinite(t_grid[i])) throw DomainError("t grid values must be positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw DomainError("t grid must be strictly increasing");
  }
  for (const auto& q : problem.singular_points) {
    require_simple(q);
    if (q.is_derham() && !opts.closed_model) require_witt(q, link_spectrum(q));
  }

  double regular_sum = 0.0;
  if (!opts.closed_model) {
    for (const auto& e : regular_entries(problem)) regular_sum += e.contribution;
  }

  const int m = problem.dimension - 1;
  struct Cell {
    double t;
    int degree;
    CheegerType type;
  };
  std::vector<Cell> cells;
  auto wanted_type = [&](CheegerType type) {
    return std::find(opts.types.begin(), opts.types.end(), type) != opts.types.end();
  };
  auto wanted_degree = [&](int i) { return !opts.only_degree || *opts.only_degree == i; };
  for (double t : t_grid) {
    if (opts.closed_model) {
      for (int i = 0; i <= m; ++i) {
        if (wanted_degree(i)) cells.push_back({t, i, CheegerType::One});
      }
    } else if (problem.complex == ComplexKind::Short) {
      for (int i = 0; i <= 1; ++i) {
        if (wanted_degree(i)) cells.push_back({t, i, CheegerType::One});
      }
    } else {
      for (int i = 0; i <= m + 1; ++i) {
        for (auto type : kAllTypes) {
          if (wanted_degree(i) && wanted_type(type) && cheeger_type_present(type, i, m)) cells.push_back({t, i, type});
        }
      }
    }
  }

  const std::size_t npts = problem.singular_points.size();
  std::vector<TraceValue> partial(cells.size() * npts);
  const ConeGeometry geom{m, problem.options.radius_b};
  const KernelOptions kopts{problem.options.quad, opts.lambda_method};
  parallel_for(partial.size(), [&](std::size_t k) {
    const Cell& cell = cells[k / npts];
    const SingularFixedPoint& q = problem.singular_points[k % npts];
    TraceValue v;
    if (opts.closed_model) {
      v = closed_model_degree(link_spectrum(q), cell.degree, cell.t);
    } else if (q.is_derham()) {
      v = cheeger_trace(cell.type, cell.degree, cell.t, ScalingMap{q.c, link_spectrum(q)}, geom, kopts);
    } else {
      const double upper = geom.radius_b * geom.radius_b / cell.t;
      v = radial_trace(short_series(q.c, short_spectrum(q), cell.degree, ext), q.c, upper, kopts.quad);
    }
    partial[k] = v;
  });

  SweepResult out;
  out.t_grid = t_grid;
  out.supertrace.assign(t_grid.size(), regular_sum);
  out.converged.assign(t_grid.size(), true);
  std::size_t ti = 0;
  double running = regular_sum;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (c > 0 && cells[c].t != cells[c - 1].t) {
      ++ti;
      running = regular_sum;
    }
    while (t_grid[ti] != cells[c].t) ++ti;
    TraceValue sum;
    for (std::size_t k = 0; k < npts; ++k) {
      const auto& v = partial[c * npts + k];
      sum.value += v.value;
      sum.error += v.error;
      sum.tail_bound += v.tail_bound;
      sum.converged = sum.converged && v.converged && std::isfinite(v.value);
    }
    const double sign = cells[c].degree % 2 == 0 ? 1.0 : -1.0;
    running += sign * sum.value;
    out.supertrace[ti] = running;
    if (!sum.converged) {
      out.converged[ti] = false;
      out.all_converged = false;
    }
    out.table.entries[HeatTraceKey{cells[c].t, cells[c].degree, cells[c].type}] = sum;
    out.rows.push_back({cells[c].t, cells[c].degree, cells[c].type, sum, running});
  }

  std::vector<double> ts, vs;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (out.converged[i]) {
      ts.push_back(t_grid[i]);
      vs.push_back(out.supertrace[i]);
    }
  }
  try {
    out.limit = richardson_to_zero(ts, vs, problem.options.extrapolation_order);
  } catch (const NonConvergenceError& e) {
    out.limit_failure = e.what();
  }
  return out;
}

}  // namespace conelef
