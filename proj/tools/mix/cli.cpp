#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "mix/construct.hpp"
#include "mix/criteria.hpp"
#include "mix/error.hpp"
#include "mix/lpcert.hpp"
#include "mix/rearrange.hpp"
#include "mix/riskbounds.hpp"

#ifndef MIX_VERSION
#define MIX_VERSION "0.0.0"
#endif

namespace mix::cli {
namespace {

struct Settings {
  double tolerance = kDefaultTolerance;
  std::optional<std::uint64_t> budget;
  std::uint64_t seed = 7;
  bool rational = false;
  bool floating = false;
  bool verify = false;
};

struct Outcome {
  int code = kMixable;
  Json result;
  std::optional<Validation> check;
};

// Bad option values are usage errors, not input errors.
struct UsageError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out << content;
    if (!out) throw Error("cannot write " + path);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot write " + path + ": " + ec.message());
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  std::ostringstream hex;
  for (unsigned int k = 0; k < length; ++k) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[k]);
  return hex.str();
}

std::uint64_t enumeration_budget(const Settings& s) {
  if (s.budget) return *s.budget;
  if (const char* env = std::getenv("MIX_BUDGET"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || *end != '\0' || v == 0) throw UsageError(std::string("MIX_BUDGET is not a positive integer: ") + env);
    return v;
  }
  return kDefaultEnumerationBudget;
}

Rational parse_option_rational(const std::string& text, const char* name) {
  try {
    return parse_rational(text);
  } catch (const InvalidInput& e) {
    throw UsageError(std::string(name) + ": " + e.what());
  }
}

std::vector<Rational> parse_list(const std::string& text, const char* name) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_option_rational(item, name));
  if (out.empty()) throw UsageError(std::string(name) + ": empty list");
  return out;
}

std::vector<NormOrder> parse_p_grid(const std::string& text) {
  std::vector<NormOrder> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inf" || item == "infinity") {
      out.push_back(NormOrder::infinity());
      continue;
    }
    const double p = to_double(parse_option_rational(item, "--p-grid"));
    if (!(p >= 1)) throw UsageError("--p-grid: orders must be at least 1");
    out.push_back({p});
  }
  if (out.empty()) throw UsageError("--p-grid: empty list");
  return out;
}

int status_code(Status s) {
  switch (s) {
    case Status::Mixable:
      return kMixable;
    case Status::NotMixable:
      return kNotMixable;
    case Status::Unknown:
      return kUnknown;
  }
  return kUnknown;
}

NumberMode number_mode(const Settings& s) { return s.floating ? NumberMode::Float : NumberMode::Auto; }

SpecFile load_specs(const std::string& path, const Settings& s, std::string& bytes) {
  bytes = read_file(path);
  SpecFile file = parse_spec_text(bytes, number_mode(s));
  if (s.rational && !file.rational) throw InvalidInput("--rational: the spec needs floating-point evaluation");
  return file;
}

std::vector<DiscreteDistribution> discrete_marginals(const SpecFile& file, std::optional<std::size_t> n) {
  std::vector<DiscreteDistribution> out;
  for (const auto& s : file.specs) {
    const auto* d = std::get_if<DiscreteDistribution>(&s.law);
    if (d == nullptr) throw InvalidInput("this command needs discrete marginals, got " + kind_name(s));
    out.push_back(*d);
  }
  if (n && out.size() == 1) out.assign(*n, out.front());
  if (n && out.size() != *n) throw InvalidInput("n does not match the number of marginals");
  return out;
}

// Structural checks a certificate must pass before it is sampled from.
Validation check_sampleable(const Certificate& cert) {
  if (const auto* a = std::get_if<ArrangementCertificate>(&cert)) {
    if (a->columns.empty()) return Validation::fail("no columns");
    const std::size_t m = a->columns.front().size();
    if (m == 0 || !is_valid(a->arrangement, m, a->columns.size())) return Validation::fail("invalid arrangement");
    for (const auto& c : a->columns) {
      if (c.size() != m) return Validation::fail("ragged columns");
    }
    for (std::size_t i = 0; i < m; ++i) {
      Rational sum = 0;
      for (std::size_t j = 0; j < a->columns.size(); ++j) sum += a->columns[j][a->arrangement.perms[j][i]];
      if (sum != a->center) return Validation::fail("row " + std::to_string(i) + " misses the center");
    }
    return Validation::pass();
  }
  if (const auto* b = std::get_if<UniformBlockMixture>(&cert)) {
    if (b->blocks.empty() || b->blocks.size() != b->weights.size()) return Validation::fail("blocks and weights differ");
    Rational total = 0;
    for (std::size_t k = 0; k < b->blocks.size(); ++k) {
      if (b->weights[k] <= 0) return Validation::fail("non-positive block weight");
      if (b->blocks[k].size() != b->blocks.front().size() || b->blocks[k].empty()) return Validation::fail("ragged blocks");
      Rational sum = 0;
      for (const auto& v : b->blocks[k]) sum += v;
      if (sum != b->center * static_cast<long>(b->blocks[k].size())) return Validation::fail("block misses the center");
      total += b->weights[k];
    }
    return total == 1 ? Validation::pass() : Validation::fail("block weights do not sum to 1");
  }
  if (const auto* p = std::get_if<JointPmf>(&cert)) {
    if (p->points.empty() || p->points.size() != p->masses.size()) return Validation::fail("points and masses differ");
    Rational total = 0;
    for (std::size_t k = 0; k < p->points.size(); ++k) {
      if (p->masses[k] < 0) return Validation::fail("negative mass");
      if (p->points[k].size() != p->points.front().size()) return Validation::fail("ragged points");
      Rational sum = 0;
      for (const auto& v : p->points[k]) sum += v;
      if (sum != p->center) return Validation::fail("point off the hyperplane");
      total += p->masses[k];
    }
    return total == 1 ? Validation::pass() : Validation::fail("masses do not sum to 1");
  }
  if (const auto* g = std::get_if<GaussianMixCertificate>(&cert)) return verify_gaussian(*g);
  return Validation::fail("certificate kind cannot be sampled");
}

Validation check_sample_rows(const SampleTable& table, const Certificate& cert) {
  if (const auto* g = std::get_if<GaussianMixCertificate>(&cert)) {
    const auto& rows = std::get<std::vector<std::vector<double>>>(table.rows);
    const double center = g->center();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      double sum = 0;
      for (const double x : rows[r]) sum += x;
      if (std::abs(sum - center) > 1e-8) return Validation::fail("sample row " + std::to_string(r) + " misses the center");
    }
    return Validation::pass();
  }
  Rational center = std::visit(
      [](const auto& c) -> Rational {
        if constexpr (requires { c.center; }) {
          if constexpr (std::is_same_v<std::decay_t<decltype(c)>, UniformBlockMixture>) {
            return c.center * static_cast<long>(c.blocks.front().size());
          } else {
            return c.center;
          }
        } else {
          return 0;
        }
      },
      cert);
  const auto& rows = std::get<std::vector<std::vector<Rational>>>(table.rows);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Rational sum = 0;
    for (const auto& x : rows[r]) sum += x;
    if (sum != center) return Validation::fail("sample row " + std::to_string(r) + " misses the center");
  }
  return Validation::pass();
}

template <class T>
Validation check_solve(const MatrixInstance<T>& instance, const SolveResult<T>& r, double tolerance) {
  const auto again = evaluate(instance, r.arrangement, r.objective, tolerance);
  if (again.row_sums != r.row_sums || again.value != r.value || again.exact_mix != r.exact_mix) {
    return Validation::fail("re-evaluating the arrangement gives a different result");
  }
  if (r.objective == Objective::Minimax && r.value < r.lower_bound) return Validation::fail("T below the lower bound");
  return Validation::pass();
}

MatrixInstance<double> to_float(const MatrixInstance<Rational>& m) {
  std::vector<std::vector<double>> cols;
  for (const auto& c : m.columns()) cols.push_back(to_doubles(c));
  return MatrixInstance<double>(std::move(cols));
}

Validation check_risk_report(const RiskBoundReport& r, double tolerance) {
  const double slack = tolerance;
  if (r.worst && r.worst->estimate > r.worst->bound.value + r.worst->epsilon + slack) {
    return Validation::fail("worst-case estimate exceeds phi + epsilon");
  }
  if (r.best && r.best->estimate < r.best->bound.value - r.best->epsilon - slack) {
    return Validation::fail("best-case estimate falls below psi - epsilon");
  }
  if (r.worst && r.best && r.best->estimate > r.worst->estimate + slack) {
    return Validation::fail("best-case estimate exceeds the worst-case one");
  }
  return Validation::pass();
}

Json settings_json(const Settings& s, std::uint64_t budget) {
  Json j;
  j["tolerance"] = s.tolerance;
  j["budget"] = budget;
  j["mode"] = s.floating ? "float" : (s.rational ? "rational" : "auto");
  j["verify"] = s.verify;
  return j;
}

}  // namespace

SpecFile parse_spec_file(const std::string& path, NumberMode mode) { return parse_spec_text(read_file(path), mode); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint and complete mixability toolkit", "mix"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", MIX_VERSION);

  Settings s;
  std::uint64_t budget_value = 0;
  app.add_option("--tolerance", s.tolerance, "Equality tolerance in float mode")->default_val(kDefaultTolerance);
  auto* budget_opt = app.add_option("--budget", budget_value,
                                    "Enumeration budget (default 1e7, or MIX_BUDGET); grid cells for decide-lp (default 1e6)");
  app.add_option("--seed", s.seed, "Random seed")->default_val(7);
  auto* rational_flag = app.add_flag("--rational", s.rational, "Require exact rational evaluation");
  app.add_flag("--float", s.floating, "Force floating-point mode")->excludes(rational_flag);
  app.add_flag("--verify", s.verify, "Re-validate every emitted certificate");

  std::string path;
  std::optional<std::size_t> n;
  std::string objective = "minimax";
  std::size_t restarts = 50;
  bool exact = false;
  std::string k_text;
  std::string sigmas_text;
  std::string mus_text;
  std::size_t count = 1000;
  std::string out_path;
  std::string p_text;
  std::size_t grid = 1000;
  std::string side = "both";

  auto* check = app.add_subcommand("check", "Decide complete or joint mixability of the marginals in a spec file");
  check->add_option("specs", path, "Spec JSON file")->required();
  check->add_option("--n", n, "Number of copies for a single marginal")->check(CLI::PositiveNumber);
  std::string p_grid_text;
  std::string t_grid_text;
  check->add_option("--p-grid", p_grid_text, "Comma-separated norm orders p >= 1, or inf (default 1,1.5,2,3,inf)");
  check->add_option("--t-grid", t_grid_text, "Comma-separated levels t for the identical-marginal norm check");

  auto* solve = app.add_subcommand("solve", "Arrange matrix columns to flatten the row sums");
  solve->add_option("matrix", path, "CSV matrix file")->required();
  solve->add_option("--objective", objective, "minimax, range or variance")->check(CLI::IsMember({"minimax", "range", "variance"}));
  solve->add_option("--restarts", restarts, "Local search restarts")->default_val(50);
  solve->add_flag("--exact", exact, "Exhaustive search instead of local search");

  auto* oracle = app.add_subcommand("oracle", "Exhaustive arrangement search");
  oracle->add_option("matrix", path, "CSV matrix file")->required();
  oracle->add_option("--objective", objective, "minimax, range or variance")->check(CLI::IsMember({"minimax", "range", "variance"}));

  auto* decide_lp = app.add_subcommand("decide-lp", "Exact LP decision with primal or dual certificate");
  decide_lp->add_option("specs", path, "Spec JSON file with discrete marginals")->required();
  decide_lp->add_option("--K", k_text, "Joint center (default: sum of means)");
  decide_lp->add_option("--n", n, "Number of copies for a single marginal")->check(CLI::PositiveNumber);

  auto* decompose = app.add_subcommand("decompose", "Uniform-block decomposition of a discrete law");
  decompose->add_option("spec", path, "Spec JSON file with one discrete marginal")->required();
  decompose->add_option("--n", n, "Number of copies")->required()->check(CLI::PositiveNumber);

  auto* gaussian = app.add_subcommand("gaussian-mix", "Gaussian joint mix from standard deviations");
  gaussian->add_option("--sigmas", sigmas_text, "Comma-separated standard deviations")->required();
  gaussian->add_option("--mus", mus_text, "Comma-separated means (default 0)");

  auto* sample = app.add_subcommand("sample", "Sample rows from a certificate");
  sample->add_option("certificate", path, "Certificate or report JSON")->required();
  sample->add_option("--count", count, "Number of rows")->default_val(1000);
  sample->add_option("--out", out_path, "CSV output path (rows go into the report when absent)");

  auto* var = app.add_subcommand("var-bounds", "Value-at-Risk bounds under dependence uncertainty");
  var->add_option("specs", path, "Spec JSON file")->required();
  var->add_option("--p", p_text, "Level in (0, 1)")->required();
  var->add_option("--N", grid, "Quantile grid size")->default_val(1000)->check(CLI::PositiveNumber);
  var->add_option("--restarts", restarts, "Local search restarts")->default_val(50);
  var->add_option("--side", side, "worst, best or both")->check(CLI::IsMember({"worst", "best", "both"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kMixable;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kMixable;
  } catch (const CLI::CallForVersion&) {
    out << MIX_VERSION << '\n';
    return kMixable;
  } catch (const CLI::ParseError& e) {
    err << "mix: " << e.what() << '\n';
    return kUsage;
  }
  if (budget_opt->count() > 0) s.budget = budget_value;

  const auto* command = app.get_subcommands().front();
  Json report;
  report["tool"] = "mix";
  report["version"] = MIX_VERSION;
  report["command"] = command->get_name();
  report["args"] = args;

  try {
    const std::uint64_t budget = enumeration_budget(s);
    report["seed"] = s.seed;
    report["settings"] = settings_json(s, command == decide_lp ? s.budget.value_or(kDefaultGridBudget) : budget);
    std::string bytes;
    Outcome outcome;

    if (command == check) {
      const auto file = load_specs(path, s, bytes);
      DecideOptions o;
      o.n = n ? n : file.n;
      o.budget = budget;
      o.seed = s.seed;
      o.tolerance = s.tolerance;
      o.norm.tolerance = s.tolerance;
      if (!p_grid_text.empty()) o.norm.p_grid = parse_p_grid(p_grid_text);
      if (!t_grid_text.empty()) o.norm.t_grid = parse_list(t_grid_text, "--t-grid");
      const Verdict v = decide(file.specs, o);
      outcome.code = status_code(v.status);
      outcome.result = to_json(v);
      outcome.result["rational"] = file.rational;
      if (s.verify) outcome.check = verify_verdict(file.specs, v, o);
    } else if (command == solve || command == oracle) {
      bytes = read_file(path);
      const auto instance = parse_matrix_csv(bytes);
      const Objective obj = parse_objective(objective);
      const bool exhaustive = command == oracle || exact;
      auto solve_with = [&](const auto& inst) {
        auto r = exhaustive ? brute_force(inst, obj, budget, s.tolerance)
                            : local_search(inst, obj, restarts, s.seed, LocalSearchOptions{.tolerance = s.tolerance});
        outcome.result = to_json(r);
        if (s.verify) outcome.check = check_solve(inst, r, s.tolerance);
      };
      if (s.floating) {
        solve_with(to_float(instance));
      } else {
        solve_with(instance);
      }
      outcome.code = kMixable;
    } else if (command == decide_lp) {
      const auto file = load_specs(path, s, bytes);
      const auto marginals = discrete_marginals(file, n ? n : file.n);
      std::optional<Rational> center;
      if (!k_text.empty()) center = parse_option_rational(k_text, "--K");
      const std::uint64_t cells = s.budget.value_or(kDefaultGridBudget);
      const Verdict v = jm_lp_decide(marginals, center, cells);
      outcome.code = status_code(v.status);
      outcome.result = to_json(v);
      if (s.verify) {
        if (const auto* pmf = std::get_if<JointPmf>(&v.certificate)) outcome.check = verify_primal(marginals, *pmf);
        if (const auto* dual = std::get_if<DualCertificate>(&v.certificate)) {
          outcome.check = verify_dual(marginals, *dual, dual->center, cells);
        }
      }
    } else if (command == decompose) {
      const auto file = load_specs(path, s, bytes);
      if (file.specs.size() != 1) throw InvalidInput("decompose takes exactly one marginal");
      const auto law = discrete_marginals(file, std::nullopt).front();
      MatrixMixOptions o;
      o.budget = budget;
      o.seed = s.seed;
      o.tolerance = s.tolerance;
      const Verdict v = discrete_cm_decompose(law, *n, o);
      outcome.code = status_code(v.status);
      outcome.result = to_json(v);
      if (s.verify) {
        if (const auto* mix = std::get_if<UniformBlockMixture>(&v.certificate)) {
          outcome.check = verify_block_mixture(law, *mix);
        }
      }
    } else if (command == gaussian) {
      bytes = sigmas_text + "|" + mus_text;
      const auto sigmas = parse_list(sigmas_text, "--sigmas");
      auto mus = mus_text.empty() ? std::vector<Rational>(sigmas.size(), Rational(0)) : parse_list(mus_text, "--mus");
      if (mus.size() != sigmas.size()) throw UsageError("--mus and --sigmas differ in length");
      const Verdict v = gaussian_joint_mix(mus, sigmas);
      outcome.code = status_code(v.status);
      outcome.result = to_json(v);
      if (s.verify) {
        if (const auto* g = std::get_if<GaussianMixCertificate>(&v.certificate)) outcome.check = verify_gaussian(*g);
      }
    } else if (command == sample) {
      bytes = read_file(path);
      const Certificate cert = certificate_from_json(parse_json_strict(bytes));
      if (const auto valid = check_sampleable(cert); !valid) {
        report["verification"] = Json{{"checked", true}, {"ok", false}, {"reason", valid.reason}};
        report["input_sha256"] = sha256_hex(bytes);
        err << "mix: invalid certificate: " << valid.reason << '\n';
        out << report.dump(2) << '\n';
        return kVerification;
      }
      const SampleTable table = sample_joint_mix(cert, count, s.seed);
      outcome.result["count"] = table.size();
      outcome.result["ks_distance"] = table.ks_distance;
      outcome.result["ks_threshold"] = count == 0 ? 0.0 : 2.0 / std::sqrt(static_cast<double>(count));
      outcome.result["ks_flagged"] = table.ks_flagged;
      if (out_path.empty()) {
        outcome.result["csv"] = to_csv(table);
      } else {
        write_atomically(out_path, to_csv(table));
        outcome.result["out"] = out_path;
      }
      if (s.verify) outcome.check = check_sample_rows(table, cert);
    } else if (command == var) {
      const Rational p = parse_option_rational(p_text, "--p");
      if (!(p > 0 && p < 1)) throw UsageError("--p must lie in (0, 1)");
      const auto file = load_specs(path, s, bytes);
      RiskBoundOptions o;
      o.grid = grid;
      o.restarts = restarts;
      o.seed = s.seed;
      o.search.tolerance = s.tolerance;
      o.decide.budget = budget;
      o.decide.seed = s.seed;
      o.decide.tolerance = s.tolerance;
      const BoundSide which = side == "worst" ? BoundSide::Worst : side == "best" ? BoundSide::Best : BoundSide::Both;
      const auto r = var_bounds(file.specs, p, which, o);
      outcome.result = to_json(r);
      if (s.verify) outcome.check = check_risk_report(r, s.tolerance);
    }

    report["input_sha256"] = sha256_hex(bytes);
    report["result"] = std::move(outcome.result);
    if (outcome.check) {
      report["verification"] = Json{{"checked", true}, {"ok", outcome.check->ok}, {"reason", outcome.check->reason}};
    } else {
      report["verification"] = Json{{"checked", false}};
    }
    out << report.dump(2) << '\n';
    if (outcome.check && !outcome.check->ok) {
      err << "mix: verification failed: " << outcome.check->reason << '\n';
      return kVerification;
    }
    return outcome.code;
  } catch (const UsageError& e) {
    err << "mix: " << e.what() << '\n';
    return kUsage;
  } catch (const BudgetExceeded& e) {
    err << "mix: budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const SchemaError& e) {
    err << "mix: schema error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    err << "mix: " << e.what() << '\n';
    return kInput;
  }
}

}  // namespace mix::cli
