#include "conelef_cli/commands.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

namespace conelef::cli {
namespace {

using nlohmann::json;

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json optional_number(const std::optional<double>& x) { return x ? number_or_null(*x) : json(nullptr); }

json report_to_json(const LefschetzReport& r) {
  json regular = json::array();
  for (const auto& e : r.regular) {
    regular.push_back({{"name", e.name},
                       {"class", std::string(to_string(e.cls))},
                       {"determinant", number_or_null(e.determinant)},
                       {"contribution", number_or_null(e.contribution)}});
  }
  json singular = json::array();
  for (const auto& e : r.singular) {
    json per = json::array(), per_err = json::array();
    for (double v : e.per_degree) per.push_back(number_or_null(v));
    for (double v : e.per_degree_error) per_err.push_back(number_or_null(v));
    singular.push_back({{"name", e.name},
                        {"class", std::string(to_string(e.cls))},
                        {"method", std::string(to_string(e.method))},
                        {"per_degree", per},
                        {"per_degree_error", per_err},
                        {"total", number_or_null(e.total)},
                        {"error", number_or_null(e.error)}});
  }
  return {{"extension", std::string(to_string(r.extension))},
          {"complex", std::string(to_string(r.complex))},
          {"regular", regular},
          {"regular_sum", number_or_null(r.regular_sum)},
          {"singular", singular},
          {"total", number_or_null(r.total)},
          {"error", number_or_null(r.error)},
          {"topological_check", optional_number(r.topological_check)},
          {"discrepancy", optional_number(r.discrepancy)},
          {"witt", r.witt},
          {"witt_discrepancy", optional_number(r.witt_discrepancy)}};
}

std::string fixed(double x, int precision = 10) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(precision) << x;
  return os.str();
}

void print_summary(const LefschetzReport& r, std::ostream& out) {
  out << "extension " << to_string(r.extension) << " (" << to_string(r.complex) << " complex)\n";
  out << "  " << std::left << std::setw(14) << "point" << std::setw(20) << "class" << "contribution\n";
  for (const auto& e : r.regular) {
    out << "  " << std::setw(14) << e.name << std::setw(20) << to_string(e.cls) << fixed(e.contribution) << '\n';
  }
  for (const auto& e : r.singular) {
    out << "  " << std::setw(14) << e.name << std::setw(20) << to_string(e.cls) << fixed(e.total) << "  +- "
        << fixed(e.error, 3) << "  [" << to_string(e.method) << "]\n";
    for (std::size_t i = 0; i < e.per_degree.size(); ++i) {
      out << "  " << std::setw(14) << "" << "zeta_" << i << " = " << fixed(e.per_degree[i]) << '\n';
    }
  }
  out << std::right;
  out << "  total              " << fixed(r.total) << "  +- " << fixed(r.error, 3) << '\n';
  if (r.topological_check) out << "  topological_check  " << fixed(*r.topological_check) << '\n';
  if (r.discrepancy) out << "  discrepancy        " << fixed(*r.discrepancy, 3) << '\n';
  if (r.witt_discrepancy) out << "  witt_discrepancy   " << fixed(*r.witt_discrepancy, 3) << '\n';
}

void compute_csv(const std::vector<LefschetzReport>& reports, std::ostream& out) {
  out << "extension,point,class,degree,zeta,error\n";
  for (const auto& r : reports) {
    const std::string ext(to_string(r.extension));
    for (const auto& e : r.regular) {
      out << ext << ',' << e.name << ',' << to_string(e.cls) << ",," << format_number(e.contribution) << ",0\n";
    }
    for (const auto& e : r.singular) {
      for (std::size_t i = 0; i < e.per_degree.size(); ++i) {
        out << ext << ',' << e.name << ',' << to_string(e.cls) << ',' << i << ',' << format_number(e.per_degree[i])
            << ',' << format_number(e.per_degree_error[i]) << '\n';
      }
    }
    out << ext << ",total,,," << format_number(r.total) << ',' << format_number(r.error) << '\n';
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot write " + path);
  f << content;
  if (!f.flush()) throw UsageError("failed writing " + path);
}

Extension sweep_extension(const ProblemConfig& config) { return extensions_of(config.extension).front(); }

void print_warnings(const ProblemConfig& config, const CliOptions& opts, std::ostream& err) {
  if (opts.quiet) return;
  for (const auto& w : config.warnings) err << "warning: " << w << '\n';
}

std::string format_of(const CliOptions& opts) {
  const std::string f = opts.format.value_or("");
  if (!f.empty() && f != "csv" && f != "json") throw UsageError("--format must be csv or json");
  return f;
}

}  // namespace

ProblemConfig apply_overrides(ProblemConfig config, const CliOptions& opts) {
  if (opts.extension) {
    if (*opts.extension != "max" && *opts.extension != "min" && *opts.extension != "both") {
      throw UsageError("--extension must be max, min or both");
    }
    config.extension = *opts.extension;
  }
  auto& n = config.numerics;
  if (opts.t_min) n.t_min = *opts.t_min;
  if (opts.t_max) n.t_max = *opts.t_max;
  if (opts.points) n.points = *opts.points;
  if (!(n.t_min > 0.0)) throw UsageError("t_min must be positive");
  if (!(n.t_min < n.t_max)) throw UsageError("t_min must be smaller than t_max");
  if (n.points < 3) throw UsageError("points must be at least 3");
  format_of(opts);
  return config;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string report_json(const ProblemConfig& config, const std::vector<LefschetzReport>& reports) {
  json doc{{"complex", std::string(to_string(config.complex))}, {"dimension", config.dimension}};
  json list = json::array();
  for (const auto& r : reports) list.push_back(report_to_json(r));
  doc["reports"] = std::move(list);
  return doc.dump(2) + "\n";
}

std::string sweep_csv(const SweepResult& sweep) {
  std::string out = "t,degree,cheeger_type,trace,tail_bound,supertrace_partial\n";
  for (const auto& row : sweep.rows) {
    const bool ok = row.trace.converged && std::isfinite(row.trace.value);
    out += format_number(row.t);
    out += ',' + std::to_string(row.degree);
    out += ',' + std::to_string(static_cast<int>(row.type));
    out += ',' + format_number(ok ? row.trace.value : std::nan(""));
    out += ',' + format_number(ok ? row.trace.tail_bound : std::numeric_limits<double>::infinity());
    out += ',' + format_number(row.supertrace_partial) + '\n';
  }
  const double limit = sweep.limit ? sweep.limit->value : std::nan("");
  const double error = sweep.limit ? sweep.limit->error : std::numeric_limits<double>::infinity();
  out += "0,,extrapolated," + format_number(limit) + ',' + format_number(error) + ',' + format_number(limit) + '\n';
  return out;
}

std::string sweep_json(const SweepResult& sweep, Extension ext) {
  json rows = json::array();
  for (const auto& row : sweep.rows) {
    rows.push_back({{"t", row.t},
                    {"degree", row.degree},
                    {"cheeger_type", static_cast<int>(row.type)},
                    {"trace", number_or_null(row.trace.value)},
                    {"error", number_or_null(row.trace.error)},
                    {"tail_bound", number_or_null(row.trace.tail_bound)},
                    {"converged", row.trace.converged},
                    {"supertrace_partial", number_or_null(row.supertrace_partial)}});
  }
  json supertrace = json::array();
  for (double v : sweep.supertrace) supertrace.push_back(number_or_null(v));
  json doc{{"extension", std::string(to_string(ext))},
           {"t_grid", sweep.t_grid},
           {"rows", rows},
           {"supertrace", supertrace},
           {"all_converged", sweep.all_converged}};
  if (sweep.limit) {
    doc["limit"] = {{"value", number_or_null(sweep.limit->value)},
                    {"error", number_or_null(sweep.limit->error)},
                    {"order", sweep.limit->order},
                    {"points_used", sweep.limit->points_used}};
  } else {
    doc["limit"] = nullptr;
    doc["limit_failure"] = sweep.limit_failure;
  }
  return doc.dump(2) + "\n";
}

std::string checks_json(const std::vector<CheckResult>& results) {
  json list = json::array();
  for (const auto& r : results) {
    list.push_back({{"id", r.id},
                    {"name", r.name},
                    {"passed", r.passed},
                    {"measured", number_or_null(r.measured)},
                    {"tolerance", r.tolerance},
                    {"seconds", r.seconds},
                    {"budget_seconds", r.budget_seconds},
                    {"detail", r.detail}});
  }
  return json{{"checks", list}}.dump(2) + "\n";
}

int cmd_compute(const ProblemConfig& input, const CliOptions& opts, std::ostream& out, std::ostream& err) {
  const ProblemConfig config = apply_overrides(input, opts);
  print_warnings(config, opts, err);
  if (!config.non_simple.empty()) {
    for (const auto& msg : config.non_simple) err << "error: not simple: " << msg << '\n';
    return kExitNotSimple;
  }
  const Problem problem = to_problem(config);
  std::vector<LefschetzReport> reports;
  for (Extension ext : extensions_of(config.extension)) reports.push_back(assemble(problem, ext));

  const std::string doc = report_json(config, reports);
  write_file(opts.output.value_or("report.json"), doc);
  const std::string format = format_of(opts);
  if (format == "json") {
    out << doc;
  } else if (format == "csv") {
    compute_csv(reports, out);
  } else if (!opts.quiet) {
    for (const auto& r : reports) print_summary(r, out);
  }
  return kExitOk;
}

int cmd_sweep(const ProblemConfig& input, const CliOptions& opts, std::ostream& out, std::ostream& err) {
  const ProblemConfig config = apply_overrides(input, opts);
  print_warnings(config, opts, err);
  if (!config.non_simple.empty()) {
    for (const auto& msg : config.non_simple) err << "error: not simple: " << msg << '\n';
    return kExitNotSimple;
  }
  const Problem problem = to_problem(config);
  const auto& n = config.numerics;
  const Extension ext = sweep_extension(config);
  if (config.extension == "both" && !opts.quiet) err << "note: sweeping the max extension only\n";
  SweepOptions sopts;
  sopts.closed_model = n.closed_model;
  sopts.lambda_method = n.lambda_method;
  const SweepResult sweep = sweep_supertrace(problem, geometric_grid(n.t_min, n.t_max, n.points), ext, sopts);

  const std::string body = format_of(opts) == "json" ? sweep_json(sweep, ext) : sweep_csv(sweep);
  if (opts.output) {
    write_file(*opts.output, body);
  } else {
    out << body;
  }
  if (!sweep.all_converged || !sweep.limit) {
    if (!opts.quiet) {
      err << "error: sweep did not converge";
      if (!sweep.limit_failure.empty()) err << ": " << sweep.limit_failure;
      err << '\n';
    }
    return kExitNonConvergence;
  }
  return kExitOk;
}

int cmd_verify(const std::optional<ProblemConfig>& input, const CliOptions& opts, std::ostream& out,
               std::ostream& err) {
  CheckSettings settings;
  std::vector<std::string> names = check_names();
  if (input) {
    const ProblemConfig config = apply_overrides(*input, opts);
    print_warnings(config, opts, err);
    if (!config.non_simple.empty()) {
      for (const auto& msg : config.non_simple) err << "error: not simple: " << msg << '\n';
      return kExitNotSimple;
    }
    names = config.checks;
    settings.tolerance = config.numerics.check_tolerance;
    settings.truncation_K = config.numerics.K;
    if (!config.singular_points.empty()) settings.problem = to_problem(config);
  } else {
    format_of(opts);
  }
  if (opts.seed) settings.seed = *opts.seed;

  const auto results = run_checks(names, settings);
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  if (format_of(opts) == "json") {
    out << checks_json(results);
  } else {
    for (const auto& r : results) {
      if (opts.quiet && r.passed) continue;
      out << (r.passed ? "PASS " : "FAIL ") << r.id << ' ' << r.name << "  measured " << fixed(r.measured, 3)
          << " tolerance " << fixed(r.tolerance, 3) << "  " << fixed(r.seconds, 3) << "s";
      if (!r.detail.empty()) out << "  " << r.detail;
      out << '\n';
    }
  }
  return all ? kExitOk : kExitVerifyFailed;
}

}  // namespace conelef::cli
