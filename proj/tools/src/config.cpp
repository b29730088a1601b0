#include "conelef_cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "conelef/checks.hpp"
#include "conelef/errors.hpp"

namespace conelef::cli {
namespace {

using nlohmann::json;

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

// Walks the document, collecting every schema violation with its JSON pointer.
class Reader {
 public:
  std::vector<std::string> issues;

  void fail(const std::string& path, const std::string& msg) { issues.push_back(path + ": " + msg); }

  void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> known) {
    for (const auto& [key, _] : obj.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) fail(path + "/" + key, "unknown field");
    }
  }

  const json* object(const json& parent, const std::string& key, const std::string& path, bool required) {
    if (!parent.contains(key)) {
      if (required) fail(path + "/" + key, "missing required object");
      return nullptr;
    }
    const json& v = parent.at(key);
    if (!v.is_object()) {
      fail(path + "/" + key, "must be an object");
      return nullptr;
    }
    return &v;
  }

  const json* array(const json& parent, const std::string& key, const std::string& path) {
    if (!parent.contains(key)) return nullptr;
    const json& v = parent.at(key);
    if (!v.is_array()) {
      fail(path + "/" + key, "must be an array");
      return nullptr;
    }
    return &v;
  }

  std::optional<double> number(const json& parent, const std::string& key, const std::string& path, bool required) {
    if (!parent.contains(key)) {
      if (required) fail(path + "/" + key, "missing required number");
      return std::nullopt;
    }
    const json& v = parent.at(key);
    if (!v.is_number()) {
      fail(path + "/" + key, "must be a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<long long> integer(const json& parent, const std::string& key, const std::string& path,
                                   bool required) {
    if (!parent.contains(key)) {
      if (required) fail(path + "/" + key, "missing required integer");
      return std::nullopt;
    }
    const json& v = parent.at(key);
    if (!v.is_number_integer()) {
      fail(path + "/" + key, "must be an integer");
      return std::nullopt;
    }
    return v.get<long long>();
  }

  std::optional<std::string> string(const json& parent, const std::string& key, const std::string& path) {
    if (!parent.contains(key)) return std::nullopt;
    const json& v = parent.at(key);
    if (!v.is_string()) {
      fail(path + "/" + key, "must be a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  std::optional<bool> boolean(const json& parent, const std::string& key, const std::string& path) {
    if (!parent.contains(key)) return std::nullopt;
    const json& v = parent.at(key);
    if (!v.is_boolean()) {
      fail(path + "/" + key, "must be true or false");
      return std::nullopt;
    }
    return v.get<bool>();
  }

  std::optional<int> degree_key(const std::string& key, const std::string& path) {
    int d = 0;
    std::istringstream is(key);
    if (!(is >> d) || !is.eof() || d < 0) {
      fail(path + "/" + key, "degree keys must be non-negative integers");
      return std::nullopt;
    }
    return d;
  }
};

LinkSpectrum read_custom(Reader& r, const json& j, const std::string& path) {
  LinkSpectrum s;
  r.reject_unknown(j, path, {"link_dim", "blocks", "harmonic_dims", "harmonic_traces", "truncation_K"});
  if (auto m = r.integer(j, "link_dim", path, true)) s.link_dim = static_cast<int>(*m);
  if (auto k = r.integer(j, "truncation_K", path, false)) s.truncation_K = static_cast<int>(*k);
  if (const json* blocks = r.object(j, "blocks", path, true)) {
    for (const auto& [key, list] : blocks->items()) {
      const std::string bpath = path + "/blocks/" + key;
      auto deg = r.degree_key(key, path + "/blocks");
      if (!deg) continue;
      if (!list.is_array()) {
        r.fail(bpath, "must be an array of blocks");
        continue;
      }
      auto& out = s.blocks_by_degree[*deg];
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string ipath = bpath + "/" + std::to_string(i);
        if (!list[i].is_object()) {
          r.fail(ipath, "block must be an object");
          continue;
        }
        r.reject_unknown(list[i], ipath, {"mu", "trace", "multiplicity"});
        EigenBlock b;
        if (auto v = r.number(list[i], "mu", ipath, true)) b.mu = *v;
        if (auto v = r.number(list[i], "trace", ipath, true)) b.pullback_trace = *v;
        if (auto v = r.integer(list[i], "multiplicity", ipath, false)) b.multiplicity = static_cast<int>(*v);
        out.push_back(b);
      }
    }
  }
  for (const char* field : {"harmonic_dims", "harmonic_traces"}) {
    if (const json* h = r.object(j, field, path, true)) {
      for (const auto& [key, v] : h->items()) {
        auto deg = r.degree_key(key, path + "/" + field);
        if (!deg) continue;
        if (std::string_view(field) == "harmonic_dims") {
          if (!v.is_number_integer()) {
            r.fail(path + "/" + field + "/" + key, "must be an integer");
          } else {
            s.harmonic_dims[*deg] = v.get<int>();
          }
        } else if (!v.is_number()) {
          r.fail(path + "/" + field + "/" + key, "must be a number");
        } else {
          s.harmonic_traces[*deg] = v.get<double>();
        }
      }
    }
  }
  return s;
}

ShortComplexSpectrum read_short(Reader& r, const json& j, const std::string& path) {
  ShortComplexSpectrum s;
  r.reject_unknown(j, path, {"link_dim", "weight_nu", "lambdas"});
  if (auto m = r.integer(j, "link_dim", path, true)) s.link_dim = static_cast<int>(*m);
  if (auto w = r.number(j, "weight_nu", path, false)) s.weight_nu = *w;
  if (const json* list = r.array(j, "lambdas", path)) {
    for (std::size_t i = 0; i < list->size(); ++i) {
      const std::string ipath = path + "/lambdas/" + std::to_string(i);
      const json& e = (*list)[i];
      if (!e.is_object()) {
        r.fail(ipath, "entry must be an object");
        continue;
      }
      r.reject_unknown(e, ipath, {"lambda", "trace", "multiplicity"});
      ShortComplexBlock b;
      if (auto v = r.number(e, "lambda", ipath, true)) b.lambda = *v;
      if (auto v = r.number(e, "trace", ipath, true)) b.pullback_trace = *v;
      if (auto v = r.integer(e, "multiplicity", ipath, false)) b.multiplicity = static_cast<int>(*v);
      s.lambdas.push_back(b);
    }
  } else {
    r.fail(path + "/lambdas", "missing required array");
  }
  return s;
}

int link_dim_of(const LinkDescriptor& link) {
  if (std::holds_alternative<CircleLink>(link)) return 1;
  if (const auto* s = std::get_if<LinkSpectrum>(&link)) return s->link_dim;
  return std::get<ShortComplexSpectrum>(link).link_dim;
}

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json blocks_json(const std::vector<EigenBlock>& blocks) {
  json arr = json::array();
  for (const auto& b : blocks) arr.push_back({{"mu", b.mu}, {"trace", b.pullback_trace}, {"multiplicity", b.multiplicity}});
  return arr;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error("invalid configuration:\n  " + join(issues, "\n  ")), issues_(std::move(issues)) {}

ProblemConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError({line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": malformed JSON (" + e.what() + ")"});
  }
  if (!doc.is_object()) throw ConfigError({"/: configuration must be a JSON object"});

  Reader r;
  ProblemConfig cfg;
  r.reject_unknown(doc, "", {"complex", "extension", "dimension", "singular_points", "regular_points", "numerics",
                             "checks"});

  if (auto c = r.string(doc, "complex", "")) {
    if (*c == "derham") {
      cfg.complex = ComplexKind::DeRham;
    } else if (*c == "short") {
      cfg.complex = ComplexKind::Short;
    } else {
      r.fail("/complex", "must be \"derham\" or \"short\"");
    }
  }
  if (auto e = r.string(doc, "extension", "")) {
    if (*e == "max" || *e == "min" || *e == "both") {
      cfg.extension = *e;
    } else {
      r.fail("/extension", "must be \"max\", \"min\" or \"both\"");
    }
  }

  if (const json* n = r.object(doc, "numerics", "", false)) {
    const std::string p = "/numerics";
    r.reject_unknown(*n, p, {"rel_tol", "K", "t_grid", "radius_b", "extrapolation_order", "mellin_cutoff",
                             "check_tolerance", "closed_model", "lambda_method"});
    auto& num = cfg.numerics;
    if (auto v = r.number(*n, "rel_tol", p, false)) {
      if (*v > 0.0) num.rel_tol = *v; else r.fail(p + "/rel_tol", "rel_tol must be positive");
    }
    if (auto v = r.integer(*n, "K", p, false)) {
      if (*v >= 1) num.K = static_cast<int>(*v); else r.fail(p + "/K", "K must be >= 1");
    }
    if (const json* g = r.object(*n, "t_grid", p, false)) {
      const std::string gp = p + "/t_grid";
      r.reject_unknown(*g, gp, {"t_min", "t_max", "points"});
      if (auto v = r.number(*g, "t_min", gp, false)) num.t_min = *v;
      if (auto v = r.number(*g, "t_max", gp, false)) num.t_max = *v;
      if (auto v = r.integer(*g, "points", gp, false)) num.points = static_cast<int>(*v);
      if (!(num.t_min > 0.0 && num.t_max > num.t_min)) r.fail(gp, "need 0 < t_min < t_max");
      if (num.points < 3) r.fail(gp + "/points", "points must be >= 3");
    }
    if (auto v = r.number(*n, "radius_b", p, false)) {
      if (*v > 0.0) num.radius_b = *v; else r.fail(p + "/radius_b", "radius_b must be positive");
    }
    if (auto v = r.integer(*n, "extrapolation_order", p, false)) {
      if (*v >= 1) num.extrapolation_order = static_cast<int>(*v);
      else r.fail(p + "/extrapolation_order", "extrapolation_order must be >= 1");
    }
    if (auto v = r.number(*n, "mellin_cutoff", p, false)) {
      if (*v > 0.0) num.mellin_cutoff = *v; else r.fail(p + "/mellin_cutoff", "mellin_cutoff must be positive");
    }
    if (auto v = r.number(*n, "check_tolerance", p, false)) {
      if (*v > 0.0) num.check_tolerance = *v; else r.fail(p + "/check_tolerance", "check_tolerance must be positive");
    }
    if (auto v = r.boolean(*n, "closed_model", p)) num.closed_model = *v;
    if (auto v = r.string(*n, "lambda_method", p)) {
      if (*v == "weber") {
        num.lambda_method = LambdaMethod::Weber;
      } else if (*v == "direct") {
        num.lambda_method = LambdaMethod::Direct;
      } else {
        r.fail(p + "/lambda_method", "must be \"weber\" or \"direct\"");
      }
    }
  }

  if (const json* list = r.array(doc, "singular_points", "")) {
    for (std::size_t i = 0; i < list->size(); ++i) {
      const std::string p = "/singular_points/" + std::to_string(i);
      const json& e = (*list)[i];
      if (!e.is_object()) {
        r.fail(p, "must be an object");
        continue;
      }
      r.reject_unknown(e, p, {"name", "c", "displacement", "link"});
      SingularDescriptor d;
      d.name = r.string(e, "name", p).value_or("q" + std::to_string(i));
      if (auto c = r.number(e, "c", p, true)) {
        d.c = *c;
        if (!(*c > 0.0)) r.fail(p + "/c", "c must be positive");
      }
      if (auto v = r.number(e, "displacement", p, false)) {
        d.displacement = *v;
        if (*v < 0.0) r.fail(p + "/displacement", "displacement must be non-negative");
      }
      const json* link = r.object(e, "link", p, true);
      if (link == nullptr) continue;
      const std::string lp = p + "/link";
      const int kinds = static_cast<int>(link->contains("builtin")) + static_cast<int>(link->contains("custom")) +
                        static_cast<int>(link->contains("short"));
      if (kinds != 1) {
        r.fail(lp, "needs exactly one of \"builtin\", \"custom\" or \"short\"");
        continue;
      }
      if (link->contains("builtin")) {
        r.reject_unknown(*link, lp, {"builtin", "alpha", "K"});
        CircleLink circle;
        if (r.string(*link, "builtin", lp).value_or("") != "circle") r.fail(lp + "/builtin", "only \"circle\" is built in");
        if (auto a = r.number(*link, "alpha", lp, true)) circle.alpha = *a;
        if (auto k = r.integer(*link, "K", lp, false)) {
          if (*k >= 1) circle.K = static_cast<int>(*k); else r.fail(lp + "/K", "K must be >= 1");
        }
        d.link = circle;
      } else if (link->contains("custom")) {
        r.reject_unknown(*link, lp, {"custom"});
        if (const json* c = r.object(*link, "custom", lp, true)) {
          auto spectrum = read_custom(r, *c, lp + "/custom");
          for (const auto& issue : blocking_violations(spectrum)) r.fail(lp + "/custom", issue);
          for (const auto& issue : trace_bound_violations(spectrum)) cfg.warnings.push_back(lp + "/custom: " + issue);
          d.link = std::move(spectrum);
        }
      } else {
        r.reject_unknown(*link, lp, {"short"});
        if (const json* s = r.object(*link, "short", lp, true)) {
          auto sc = read_short(r, *s, lp + "/short");
          for (const auto& issue : validate(sc)) r.fail(lp + "/short", issue);
          d.link = std::move(sc);
        }
      }
      const bool short_link = std::holds_alternative<ShortComplexSpectrum>(d.link);
      if (short_link != (cfg.complex == ComplexKind::Short)) {
        r.fail(lp, short_link ? "short-complex data requires \"complex\": \"short\""
                              : "link spectra require \"complex\": \"derham\"");
      }
      cfg.singular_points.push_back(std::move(d));
    }
  }

  if (const json* list = r.array(doc, "regular_points", "")) {
    for (std::size_t i = 0; i < list->size(); ++i) {
      const std::string p = "/regular_points/" + std::to_string(i);
      const json& e = (*list)[i];
      if (!e.is_object()) {
        r.fail(p, "must be an object");
        continue;
      }
      r.reject_unknown(e, p, {"name", "jacobian", "endo_traces"});
      RegularDescriptor d;
      d.name = r.string(e, "name", p).value_or("p" + std::to_string(i));
      if (const json* rows = r.array(e, "jacobian", p)) {
        for (const auto& row : *rows) {
          std::vector<double> vals;
          if (!row.is_array()) {
            r.fail(p + "/jacobian", "rows must be arrays of numbers");
            break;
          }
          for (const auto& x : row) {
            if (!x.is_number()) {
              r.fail(p + "/jacobian", "entries must be numbers");
              break;
            }
            vals.push_back(x.get<double>());
          }
          d.jacobian.push_back(std::move(vals));
        }
      } else {
        r.fail(p + "/jacobian", "missing required array");
      }
      if (const json* tr = r.array(e, "endo_traces", p)) {
        std::vector<double> vals;
        for (const auto& x : *tr) {
          if (x.is_number()) vals.push_back(x.get<double>()); else r.fail(p + "/endo_traces", "entries must be numbers");
        }
        d.endo_traces = std::move(vals);
      }
      cfg.regular_points.push_back(std::move(d));
    }
  }

  // Dimension: explicit, or inferred from the first fixed point.
  std::optional<int> dim;
  if (auto v = r.integer(doc, "dimension", "", false)) {
    if (*v >= 1) dim = static_cast<int>(*v); else r.fail("/dimension", "dimension must be >= 1");
  }
  if (!dim && !cfg.singular_points.empty()) dim = link_dim_of(cfg.singular_points.front().link) + 1;
  if (!dim && !cfg.regular_points.empty()) dim = static_cast<int>(cfg.regular_points.front().jacobian.size());
  cfg.dimension = dim.value_or(2);
  for (std::size_t i = 0; i < cfg.singular_points.size(); ++i) {
    const auto& d = cfg.singular_points[i];
    const int ld = link_dim_of(d.link);
    if (ld + 1 != cfg.dimension) {
      r.fail("/singular_points/" + std::to_string(i),
             "dimension mismatch at '" + d.name + "': link dimension " + std::to_string(ld) + " needs dimension " +
                 std::to_string(ld + 1) + ", problem has " + std::to_string(cfg.dimension));
    }
  }
  for (std::size_t i = 0; i < cfg.regular_points.size(); ++i) {
    const auto& d = cfg.regular_points[i];
    const bool square = std::all_of(d.jacobian.begin(), d.jacobian.end(), [&](const std::vector<double>& row) {
      return static_cast<int>(row.size()) == cfg.dimension;
    });
    if (static_cast<int>(d.jacobian.size()) != cfg.dimension || !square) {
      const std::size_t cols = d.jacobian.empty() ? 0 : d.jacobian.front().size();
      r.fail("/regular_points/" + std::to_string(i) + "/jacobian",
             "dimension mismatch at '" + d.name + "': jacobian is " + std::to_string(d.jacobian.size()) + "x" +
                 std::to_string(cols) + ", expected " + std::to_string(cfg.dimension) + "x" +
                 std::to_string(cfg.dimension));
    }
    if (cfg.complex == ComplexKind::Short && !d.endo_traces) {
      r.fail("/regular_points/" + std::to_string(i), "the short complex needs endo_traces");
    }
  }

  if (const json* list = r.array(doc, "checks", "")) {
    for (std::size_t i = 0; i < list->size(); ++i) {
      const json& e = (*list)[i];
      const auto name = e.is_string() ? canonical_check_name(e.get<std::string>()) : std::nullopt;
      if (!name) {
        r.fail("/checks/" + std::to_string(i),
               "unknown check " + e.dump() + "; valid names: " + join(check_names(), ", "));
      } else {
        cfg.checks.push_back(*name);
      }
    }
  } else {
    cfg.checks = check_names();
  }

  if (!r.issues.empty()) throw ConfigError(r.issues);

  // Non-simple points are not schema errors; commands report them with exit code 3.
  const Problem problem = to_problem(cfg);
  for (const auto& p : problem.regular_points) {
    const auto s = regular_simplicity(p);
    if (!s.simple) cfg.non_simple.push_back("regular point '" + p.name + "': " + s.diagnostic);
  }
  for (const auto& q : problem.singular_points) {
    if (classify_singular(q) == FixedPointClass::NotSimple) {
      cfg.non_simple.push_back("singular point '" + q.name + "': c = 1 and the link map has a fixed point");
    }
  }
  return cfg;
}

std::string serialize_config(const ProblemConfig& cfg) {
  json doc;
  doc["complex"] = std::string(to_string(cfg.complex));
  doc["extension"] = cfg.extension;
  doc["dimension"] = cfg.dimension;
  json singular = json::array();
  for (const auto& d : cfg.singular_points) {
    json e{{"name", d.name}, {"c", d.c}};
    if (d.displacement) e["displacement"] = *d.displacement;
    if (const auto* circle = std::get_if<CircleLink>(&d.link)) {
      e["link"] = {{"builtin", "circle"}, {"alpha", circle->alpha}};
      if (circle->K) e["link"]["K"] = *circle->K;
    } else if (const auto* s = std::get_if<LinkSpectrum>(&d.link)) {
      json blocks = json::object();
      for (const auto& [deg, list] : s->blocks_by_degree) blocks[std::to_string(deg)] = blocks_json(list);
      json dims = json::object(), traces = json::object();
      for (const auto& [deg, v] : s->harmonic_dims) dims[std::to_string(deg)] = v;
      for (const auto& [deg, v] : s->harmonic_traces) traces[std::to_string(deg)] = v;
      e["link"] = {{"custom",
                    {{"link_dim", s->link_dim},
                     {"truncation_K", s->truncation_K},
                     {"blocks", blocks},
                     {"harmonic_dims", dims},
                     {"harmonic_traces", traces}}}};
    } else {
      const auto& sc = std::get<ShortComplexSpectrum>(d.link);
      json lambdas = json::array();
      for (const auto& b : sc.lambdas) {
        lambdas.push_back({{"lambda", b.lambda}, {"trace", b.pullback_trace}, {"multiplicity", b.multiplicity}});
      }
      e["link"] = {{"short", {{"link_dim", sc.link_dim}, {"weight_nu", sc.weight_nu}, {"lambdas", lambdas}}}};
    }
    singular.push_back(std::move(e));
  }
  doc["singular_points"] = std::move(singular);
  json regular = json::array();
  for (const auto& d : cfg.regular_points) {
    json e{{"name", d.name}, {"jacobian", d.jacobian}};
    if (d.endo_traces) e["endo_traces"] = *d.endo_traces;
    regular.push_back(std::move(e));
  }
  doc["regular_points"] = std::move(regular);
  const auto& n = cfg.numerics;
  json numerics{{"rel_tol", n.rel_tol},
                {"K", n.K},
                {"t_grid", {{"t_min", n.t_min}, {"t_max", n.t_max}, {"points", n.points}}},
                {"radius_b", n.radius_b},
                {"extrapolation_order", n.extrapolation_order},
                {"mellin_cutoff", n.mellin_cutoff},
                {"closed_model", n.closed_model},
                {"lambda_method", n.lambda_method == LambdaMethod::Weber ? "weber" : "direct"}};
  if (n.check_tolerance) numerics["check_tolerance"] = *n.check_tolerance;
  doc["numerics"] = std::move(numerics);
  doc["checks"] = cfg.checks;
  return doc.dump(2) + "\n";
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({path + ": cannot open configuration file"});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Problem to_problem(const ProblemConfig& cfg) {
  Problem p;
  p.complex = cfg.complex;
  p.dimension = cfg.dimension;
  p.options.quad.rel_tol = cfg.numerics.rel_tol;
  p.options.radius_b = cfg.numerics.radius_b;
  p.options.extrapolation_order = cfg.numerics.extrapolation_order;
  p.options.mellin_cutoff = cfg.numerics.mellin_cutoff;
  p.options.cross_checks = !cfg.checks.empty();
  for (const auto& d : cfg.singular_points) {
    SingularFixedPoint q;
    q.name = d.name;
    q.c = d.c;
    if (const auto* circle = std::get_if<CircleLink>(&d.link)) {
      q.spectrum = circle_spectrum(circle->alpha, circle->K.value_or(cfg.numerics.K));
      q.link_map_displacement = d.displacement.value_or(circle_displacement(circle->alpha));
    } else {
      q.link_map_displacement = d.displacement.value_or(0.0);
      if (const auto* s = std::get_if<LinkSpectrum>(&d.link)) {
        q.spectrum = *s;
      } else {
        q.spectrum = std::get<ShortComplexSpectrum>(d.link);
      }
    }
    p.singular_points.push_back(std::move(q));
  }
  for (const auto& d : cfg.regular_points) {
    RegularFixedPoint r;
    r.name = d.name;
    const auto n = static_cast<Eigen::Index>(d.jacobian.size());
    r.jacobian = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n && j < static_cast<Eigen::Index>(d.jacobian[i].size()); ++j) {
        r.jacobian(i, j) = d.jacobian[i][j];
      }
    }
    r.endo_traces = d.endo_traces;
    p.regular_points.push_back(std::move(r));
  }
  return p;
}

std::vector<Extension> extensions_of(std::string_view extension) {
  if (extension == "max") return {Extension::Max};
  if (extension == "min") return {Extension::Min};
  if (extension == "both") return {Extension::Max, Extension::Min};
  throw DomainError("extension must be max, min or both");
}

}  // namespace conelef::cli
