#include "mix/io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "mix/error.hpp"

namespace mix {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Json integer_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
    return v.convert_to<std::int64_t>();
  }
  return v.str();
}

Json double_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double double_from_json(const Json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  throw SchemaError(where, "expected a number");
}

template <class T, class F>
Json array_json(const std::vector<T>& values, F&& convert) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(convert(v));
  return out;
}

Json rationals_json(const std::vector<Rational>& values) {
  return array_json(values, [](const Rational& v) { return to_json(v); });
}

Json doubles_json(const std::vector<double>& values) { return array_json(values, double_json); }

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string at(const std::string& where, const char* key) { return where.empty() ? key : where + "." + key; }
std::string at(const std::string& where, std::size_t index) { return where + "[" + std::to_string(index) + "]"; }

std::vector<Rational> rational_array(const Json& obj, const char* key, const std::string& where) {
  const auto& arr = field(obj, key, where);
  const auto path = at(where, key);
  if (!arr.is_array()) throw SchemaError(path, "expected an array");
  std::vector<Rational> out;
  for (std::size_t k = 0; k < arr.size(); ++k) out.push_back(rational_from_json(arr[k], at(path, k)));
  return out;
}

std::vector<double> double_array(const Json& obj, const char* key, const std::string& where) {
  const auto& arr = field(obj, key, where);
  const auto path = at(where, key);
  if (!arr.is_array()) throw SchemaError(path, "expected an array");
  std::vector<double> out;
  for (std::size_t k = 0; k < arr.size(); ++k) out.push_back(double_from_json(arr[k], at(path, k)));
  return out;
}

std::vector<std::vector<Rational>> rational_matrix(const Json& obj, const char* key, const std::string& where) {
  const auto& arr = field(obj, key, where);
  const auto path = at(where, key);
  if (!arr.is_array()) throw SchemaError(path, "expected an array of arrays");
  std::vector<std::vector<Rational>> out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const auto row_path = at(path, k);
    if (!arr[k].is_array()) throw SchemaError(row_path, "expected an array");
    std::vector<Rational> row;
    for (std::size_t j = 0; j < arr[k].size(); ++j) row.push_back(rational_from_json(arr[k][j], at(row_path, j)));
    out.push_back(std::move(row));
  }
  return out;
}

Rational rational_field(const Json& obj, const char* key, const std::string& where) {
  return rational_from_json(field(obj, key, where), at(where, key));
}

std::string string_field(const Json& obj, const char* key, const std::string& where) {
  const auto& v = field(obj, key, where);
  if (!v.is_string()) throw SchemaError(at(where, key), "expected a string");
  return v.get<std::string>();
}

void only_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool known = key == "type" || key == "symmetric_unimodal";
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw SchemaError(at(where, key.c_str()), "unknown field");
  }
}

QuantileTable table_from_json(const Json& obj, const std::string& where) {
  return QuantileTable{double_array(obj, "q", where), double_array(obj, "x", where)};
}

DistributionSpec parse_spec(const Json& obj, const std::string& where, NumberMode mode) {
  if (!obj.is_object()) throw SchemaError(where, "expected a marginal spec object");
  const std::string type = string_field(obj, "type", where);
  std::optional<DistributionSpec> spec;
  try {
    if (type == "discrete") {
      only_keys(obj, {"points", "weights"}, where);
      const auto points = rational_array(obj, "points", where);
      const auto weights = rational_array(obj, "weights", where);
      if (points.empty()) throw SchemaError(at(where, "points"), "must not be empty");
      if (points.size() != weights.size()) throw SchemaError(where, "points and weights differ in length");
      Rational total = 0;
      for (std::size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] <= 0) throw SchemaError(at(at(where, "weights"), k), "weights must be positive");
        total += weights[k];
      }
      const bool exact = mode != NumberMode::Float;
      if (exact ? total != 1 : std::abs(to_double(total) - 1.0) > 1e-12) {
        throw SchemaError(at(where, "weights"), "weights must sum to 1 (got " + to_string(total) + ")");
      }
      spec = discrete(make_discrete(points, weights, exact));
    } else if (type == "uniform") {
      only_keys(obj, {"a", "b"}, where);
      spec = uniform(rational_field(obj, "a", where), rational_field(obj, "b", where));
    } else if (type == "monotone") {
      only_keys(obj, {"a", "b", "mean", "direction", "table"}, where);
      const std::string dir = string_field(obj, "direction", where);
      if (dir != "increasing" && dir != "decreasing") {
        throw SchemaError(at(where, "direction"), "must be \"increasing\" or \"decreasing\"");
      }
      std::optional<QuantileTable> table;
      if (obj.contains("table")) table = table_from_json(obj.at("table"), at(where, "table"));
      spec = monotone_density(rational_field(obj, "a", where), rational_field(obj, "b", where),
                              rational_field(obj, "mean", where),
                              dir == "increasing" ? Direction::Increasing : Direction::Decreasing, std::move(table));
    } else if (type == "concave") {
      only_keys(obj, {"a", "b"}, where);
      spec = concave_density(rational_field(obj, "a", where), rational_field(obj, "b", where));
    } else if (type == "floor") {
      only_keys(obj, {"a", "b", "density_floor"}, where);
      spec = bounded_below_density(rational_field(obj, "a", where), rational_field(obj, "b", where),
                                   rational_field(obj, "density_floor", where));
    } else if (type == "normal") {
      only_keys(obj, {"mu", "sigma"}, where);
      spec = normal(rational_field(obj, "mu", where), rational_field(obj, "sigma", where));
    } else if (type == "elliptical") {
      only_keys(obj, {"mu", "sigma", "generator"}, where);
      spec = elliptical(rational_field(obj, "mu", where), rational_field(obj, "sigma", where),
                        string_field(obj, "generator", where));
    } else if (type == "quantile_table") {
      only_keys(obj, {"q", "x"}, where);
      auto t = table_from_json(obj, where);
      spec = quantile_table(std::move(t.q), std::move(t.x));
    } else {
      throw SchemaError(at(where, "type"), "unknown marginal type \"" + type + "\"");
    }
  } catch (const InvalidInput& e) {
    throw SchemaError(where, e.what());
  }
  if (obj.contains("symmetric_unimodal")) {
    const auto& flag = obj.at("symmetric_unimodal");
    if (!flag.is_boolean()) throw SchemaError(at(where, "symmetric_unimodal"), "expected a boolean");
    spec->symmetric_unimodal = flag.get<bool>();
  }
  return *spec;
}

Json perms_json(const Arrangement& a) {
  Json out = Json::array();
  for (const auto& perm : a.perms) out.push_back(perm);
  return out;
}

Arrangement perms_from_json(const Json& obj, const std::string& where) {
  const auto& arr = field(obj, "perms", where);
  if (!arr.is_array()) throw SchemaError(at(where, "perms"), "expected an array of arrays");
  Arrangement a;
  for (const auto& perm : arr) {
    if (!perm.is_array()) throw SchemaError(at(where, "perms"), "expected an array of arrays");
    std::vector<std::size_t> p;
    for (const auto& v : perm) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw SchemaError(at(where, "perms"), "entries must be nonnegative integers");
      }
      p.push_back(v.get<std::size_t>());
    }
    a.perms.push_back(std::move(p));
  }
  return a;
}

template <class T>
Json scalar_json(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return double_json(v);
  } else {
    return to_json(v);
  }
}

template <class T>
Json solve_json(const SolveResult<T>& r) {
  Json out;
  out["objective"] = to_string(r.objective);
  out["T"] = scalar_json(r.value);
  out["lower_bound"] = scalar_json(r.lower_bound);
  out["exact_mix"] = r.exact_mix;
  out["row_sums"] = array_json(r.row_sums, [](const T& v) { return scalar_json(v); });
  out["perms"] = perms_json(r.arrangement);
  out["diagnostics"] = to_json(r.diagnostics);
  return out;
}

Json bound_json(const BoundValue& b) {
  Json out;
  out["value"] = double_json(b.value);
  out["exact"] = b.exact ? to_json(*b.exact) : Json(nullptr);
  return out;
}

Json side_json(const SideReport& s, const char* estimate_key, const char* bound_key) {
  Json out;
  out[estimate_key] = double_json(s.estimate);
  out[bound_key] = bound_json(s.bound);
  out["epsilon"] = double_json(s.epsilon);
  out["sharp"] = s.sharp;
  out["note"] = s.sharp ? "tail-conditional marginals certified jointly mixable"
                        : "bound, not attained-verified";
  Json tail;
  tail["status"] = to_string(s.tail_verdict.status);
  tail["reason"] = s.tail_verdict.reason;
  tail["diagnostic"] = s.tail_verdict.diagnostic;
  out["tail_verdict"] = std::move(tail);
  out["search"] = to_json(s.diagnostics);
  return out;
}

}  // namespace

Json parse_json_strict(std::string_view text) {
  std::vector<std::set<std::string>> keys;
  std::string duplicate;
  auto callback = [&](int, Json::parse_event_t event, Json& parsed) {
    switch (event) {
      case Json::parse_event_t::object_start:
        keys.emplace_back();
        break;
      case Json::parse_event_t::object_end:
        if (!keys.empty()) keys.pop_back();
        break;
      case Json::parse_event_t::key: {
        const auto key = parsed.get<std::string>();
        if (!keys.empty() && !keys.back().insert(key).second && duplicate.empty()) duplicate = key;
        break;
      }
      default:
        break;
    }
    return true;
  };
  Json out;
  try {
    out = Json::parse(text.begin(), text.end(), callback);
  } catch (const Json::parse_error& e) {
    throw SchemaError("", e.what());
  }
  if (!duplicate.empty()) throw SchemaError(duplicate, "duplicate key");
  return out;
}

SpecFile parse_spec_text(std::string_view text, NumberMode mode) {
  const Json doc = parse_json_strict(text);
  SpecFile file;
  const Json* list = &doc;
  std::string base = "";
  if (doc.is_object() && doc.contains("marginals")) {
    for (const auto& [key, value] : doc.items()) {
      if (key != "marginals" && key != "n") throw SchemaError(key, "unknown field");
    }
    list = &doc.at("marginals");
    base = "marginals";
    if (doc.contains("n")) {
      const auto& n = doc.at("n");
      if (!n.is_number_unsigned() || n.get<std::uint64_t>() == 0) throw SchemaError("n", "expected a positive integer");
      file.n = n.get<std::size_t>();
    }
  }
  if (list->is_object()) {
    file.specs.push_back(parse_spec(*list, base, mode));
  } else if (list->is_array()) {
    if (list->empty()) throw SchemaError(base, "no marginals given");
    for (std::size_t k = 0; k < list->size(); ++k) file.specs.push_back(parse_spec((*list)[k], at(base, k), mode));
  } else {
    throw SchemaError(base, "expected a spec object or an array of them");
  }
  file.rational = mode != NumberMode::Float;
  for (const auto& s : file.specs) file.rational = file.rational && is_rational(s);
  return file;
}

Json to_json(const Rational& value) {
  Json out;
  out["num"] = integer_json(boost::multiprecision::numerator(value));
  out["den"] = integer_json(boost::multiprecision::denominator(value));
  return out;
}

Rational rational_from_json(const Json& v, const std::string& where) {
  try {
    if (v.is_number_unsigned()) return Rational(BigInt(v.get<std::uint64_t>()));
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_number_float()) return rational_from_decimal_double(v.get<double>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_object()) {
      for (const auto& [key, value] : v.items()) {
        if (key != "num" && key != "den") throw SchemaError(at(where, key.c_str()), "unknown field");
      }
      const Rational num = rational_from_json(field(v, "num", where), at(where, "num"));
      const Rational den = rational_from_json(field(v, "den", where), at(where, "den"));
      if (den == 0) throw SchemaError(at(where, "den"), "zero denominator");
      return num / den;
    }
  } catch (const InvalidInput& e) {
    throw SchemaError(where, e.what());
  }
  throw SchemaError(where, "expected a number, \"a/b\" string or {\"num\", \"den\"} object");
}

Json to_json(const DiscreteDistribution& law) {
  Json out;
  out["type"] = "discrete";
  out["points"] = rationals_json(law.points());
  out["weights"] = rationals_json(law.weights());
  return out;
}

Json to_json(const DistributionSpec& spec) {
  Json out = std::visit(
      Overloaded{
          [](const DiscreteDistribution& d) { return to_json(d); },
          [](const Uniform& u) { return Json{{"type", "uniform"}, {"a", to_json(u.a)}, {"b", to_json(u.b)}}; },
          [](const MonotoneDensity& m) {
            Json j{{"type", "monotone"},
                   {"a", to_json(m.a)},
                   {"b", to_json(m.b)},
                   {"mean", to_json(m.mean)},
                   {"direction", m.direction == Direction::Increasing ? "increasing" : "decreasing"}};
            if (m.table) j["table"] = Json{{"q", doubles_json(m.table->q)}, {"x", doubles_json(m.table->x)}};
            return j;
          },
          [](const ConcaveDensity& c) { return Json{{"type", "concave"}, {"a", to_json(c.a)}, {"b", to_json(c.b)}}; },
          [](const BoundedBelowDensity& f) {
            return Json{{"type", "floor"}, {"a", to_json(f.a)}, {"b", to_json(f.b)}, {"density_floor", to_json(f.density_floor)}};
          },
          [](const Elliptical& e) {
            return Json{{"type", "elliptical"}, {"mu", to_json(e.mu)}, {"sigma", to_json(e.sigma)}, {"generator", e.generator}};
          },
          [](const Normal& n) { return Json{{"type", "normal"}, {"mu", to_json(n.mu)}, {"sigma", to_json(n.sigma)}}; },
          [](const QuantileTable& t) {
            return Json{{"type", "quantile_table"}, {"q", doubles_json(t.q)}, {"x", doubles_json(t.x)}};
          },
      },
      spec.law);
  if (spec.symmetric_unimodal) out["symmetric_unimodal"] = true;
  return out;
}

Json to_json(const Certificate& certificate) {
  return std::visit(
      Overloaded{
          [](const std::monostate&) { return Json(nullptr); },
          [](const ArrangementCertificate& c) {
            Json j;
            j["kind"] = "arrangement";
            j["center"] = to_json(c.center);
            Json cols = Json::array();
            for (const auto& col : c.columns) cols.push_back(rationals_json(col));
            j["columns"] = std::move(cols);
            j["perms"] = perms_json(c.arrangement);
            return j;
          },
          [](const JointPmf& p) {
            Json j;
            j["kind"] = "joint_pmf";
            j["center"] = to_json(p.center);
            Json pts = Json::array();
            for (const auto& pt : p.points) pts.push_back(rationals_json(pt));
            j["points"] = std::move(pts);
            j["masses"] = rationals_json(p.masses);
            return j;
          },
          [](const DualCertificate& d) {
            Json j;
            j["kind"] = "dual";
            j["center"] = to_json(d.center);
            Json fs = Json::array();
            for (const auto& f : d.functions) {
              fs.push_back(Json{{"points", rationals_json(f.points)}, {"values", rationals_json(f.values)}});
            }
            j["functions"] = std::move(fs);
            return j;
          },
          [](const UniformBlockMixture& b) {
            Json j;
            j["kind"] = "uniform_block_mixture";
            j["center"] = to_json(b.center);
            Json blocks = Json::array();
            for (const auto& block : b.blocks) blocks.push_back(rationals_json(block));
            j["blocks"] = std::move(blocks);
            j["weights"] = rationals_json(b.weights);
            return j;
          },
          [](const GaussianMixCertificate& g) {
            Json j;
            j["kind"] = "gaussian";
            j["mus"] = doubles_json(g.mus);
            j["sigmas"] = doubles_json(g.sigmas);
            Json corr = Json::array();
            for (const auto& row : g.corr) corr.push_back(doubles_json(row));
            j["corr"] = std::move(corr);
            return j;
          },
          [](const NormViolation& v) {
            Json j;
            j["kind"] = "norm_violation";
            j["index"] = v.index ? Json(*v.index) : Json(nullptr);
            j["p"] = double_json(v.p);
            j["split"] = doubles_json(v.split);
            j["t"] = v.t ? double_json(*v.t) : Json(nullptr);
            j["inequality"] = v.inequality;
            j["lhs"] = double_json(v.lhs);
            j["rhs"] = double_json(v.rhs);
            return j;
          },
      },
      certificate);
}

Certificate certificate_from_json(const Json& value) {
  if (!value.is_object()) throw SchemaError("", "expected a certificate object");
  if (!value.contains("kind")) {
    for (const char* key : {"certificate", "result", "verdict"}) {
      if (value.contains(key) && value.at(key).is_object()) return certificate_from_json(value.at(key));
    }
    throw SchemaError("", "no certificate found (missing \"kind\")");
  }
  const std::string where = "certificate";
  const std::string kind = string_field(value, "kind", where);
  if (kind == "arrangement") {
    ArrangementCertificate c;
    c.center = rational_field(value, "center", where);
    c.columns = rational_matrix(value, "columns", where);
    c.arrangement = perms_from_json(value, where);
    if (c.columns.empty()) throw SchemaError(at(where, "columns"), "must not be empty");
    return c;
  }
  if (kind == "joint_pmf") {
    JointPmf p;
    p.center = rational_field(value, "center", where);
    p.points = rational_matrix(value, "points", where);
    p.masses = rational_array(value, "masses", where);
    return p;
  }
  if (kind == "dual") {
    DualCertificate d;
    d.center = rational_field(value, "center", where);
    const auto& fs = field(value, "functions", where);
    if (!fs.is_array()) throw SchemaError(at(where, "functions"), "expected an array");
    for (std::size_t k = 0; k < fs.size(); ++k) {
      const auto path = at(at(where, "functions"), k);
      d.functions.push_back({rational_array(fs[k], "points", path), rational_array(fs[k], "values", path)});
    }
    return d;
  }
  if (kind == "uniform_block_mixture") {
    UniformBlockMixture b;
    b.center = rational_field(value, "center", where);
    b.blocks = rational_matrix(value, "blocks", where);
    b.weights = rational_array(value, "weights", where);
    return b;
  }
  if (kind == "gaussian") {
    GaussianMixCertificate g;
    g.mus = double_array(value, "mus", where);
    g.sigmas = double_array(value, "sigmas", where);
    const auto& corr = field(value, "corr", where);
    if (!corr.is_array()) throw SchemaError(at(where, "corr"), "expected an array of arrays");
    for (std::size_t k = 0; k < corr.size(); ++k) {
      std::vector<double> row;
      if (!corr[k].is_array()) throw SchemaError(at(at(where, "corr"), k), "expected an array");
      for (std::size_t j = 0; j < corr[k].size(); ++j) row.push_back(double_from_json(corr[k][j], at(at(where, "corr"), k)));
      g.corr.push_back(std::move(row));
    }
    return g;
  }
  if (kind == "norm_violation") {
    NormViolation v;
    const auto& idx = field(value, "index", where);
    if (!idx.is_null()) v.index = idx.get<std::size_t>();
    v.p = double_from_json(field(value, "p", where), at(where, "p"));
    v.split = double_array(value, "split", where);
    const auto& t = field(value, "t", where);
    if (!t.is_null()) v.t = double_from_json(t, at(where, "t"));
    v.inequality = field(value, "inequality", where).get<int>();
    v.lhs = double_from_json(field(value, "lhs", where), at(where, "lhs"));
    v.rhs = double_from_json(field(value, "rhs", where), at(where, "rhs"));
    return v;
  }
  throw SchemaError(at(where, "kind"), "unknown certificate kind \"" + kind + "\"");
}

Json to_json(const Verdict& verdict) {
  Json out;
  out["status"] = to_string(verdict.status);
  out["reason"] = verdict.reason;
  out["diagnostic"] = verdict.diagnostic;
  out["certificate"] = to_json(verdict.certificate);
  return out;
}

Json to_json(const NormCheckReport& report) {
  Json out;
  out["ok"] = report.ok();
  out["p_grid"] = doubles_json(report.p_grid);
  out["t_grid"] = doubles_json(report.t_grid);
  out["splits_checked"] = report.splits_checked;
  out["complete_mix_form"] = report.complete_mix_form;
  Json violations = Json::array();
  for (const auto& v : report.violations) violations.push_back(to_json(Certificate{v}));
  out["violations"] = std::move(violations);
  return out;
}

Json to_json(const SearchDiagnostics& d) {
  Json out;
  out["method"] = d.method;
  out["leaves"] = d.leaves;
  out["restarts"] = d.restarts;
  out["best_restart"] = d.best_restart;
  out["sweeps"] = d.sweeps;
  out["swaps"] = d.swaps;
  out["converged"] = d.converged;
  return out;
}

Json to_json(const SolveResult<double>& result) { return solve_json(result); }
Json to_json(const SolveResult<Rational>& result) { return solve_json(result); }

Json to_json(const RiskBoundReport& report) {
  Json out;
  out["p"] = to_json(report.p);
  out["grid"] = report.grid;
  if (report.worst) {
    out["phi"] = double_json(report.worst->bound.value);
    out["wvar_estimate"] = double_json(report.worst->estimate);
    out["sharp"] = report.worst->sharp;
    out["worst"] = side_json(*report.worst, "wvar_estimate", "phi");
  }
  if (report.best) {
    out["psi"] = double_json(report.best->bound.value);
    out["bvar_estimate"] = double_json(report.best->estimate);
    out["best"] = side_json(*report.best, "bvar_estimate", "psi");
  }
  return out;
}

MatrixInstance<Rational> parse_matrix_csv(std::string_view text) {
  std::vector<std::vector<Rational>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (line.back() == ',') cells.emplace_back();
    std::vector<Rational> row;
    try {
      for (const auto& c : cells) row.push_back(parse_rational(c));
    } catch (const InvalidInput& e) {
      if (!seen_content) {
        seen_content = true;  // header line
        continue;
      }
      throw SchemaError("line " + std::to_string(line_no), e.what());
    }
    seen_content = true;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw SchemaError("line " + std::to_string(line_no), "expected " + std::to_string(rows.front().size()) +
                                                               " columns, got " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw SchemaError("", "matrix has no data rows");
  try {
    return MatrixInstance<Rational>::from_rows(rows);
  } catch (const InvalidInput& e) {
    throw SchemaError("", e.what());
  }
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto res = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, res.ptr);
}

std::string to_csv(const SampleTable& table) {
  std::string out;
  std::visit(
      [&](const auto& rows) {
        const std::size_t n = rows.empty() ? table.ks_distance.size() : rows.front().size();
        for (std::size_t i = 0; i < n; ++i) out += (i ? ",x" : "x") + std::to_string(i + 1);
        out += '\n';
        for (const auto& row : rows) {
          for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            if constexpr (std::is_same_v<std::decay_t<decltype(row[i])>, double>) {
              out += format_double(row[i]);
            } else {
              out += to_string(row[i]);
            }
          }
          out += '\n';
        }
      },
      table.rows);
  return out;
}

}  // namespace mix
