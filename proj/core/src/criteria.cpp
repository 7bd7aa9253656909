#include "mix/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mix/construct.hpp"
#include "mix/error.hpp"

namespace mix {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool exact_order(NormOrder order) { return order.p == 1 || std::isinf(order.p); }

// ||(X - c)_+|| (positive) or ||(X - c)_-|| for p in {1, infinity}.
Rational exact_part_norm(const DiscreteDistribution& law, const Rational& c, NormOrder order, bool positive) {
  Rational out = 0;
  for (std::size_t k = 0; k < law.size(); ++k) {
    Rational part = positive ? Rational(law.points()[k] - c) : Rational(c - law.points()[k]);
    if (part <= 0) continue;
    if (std::isinf(order.p)) {
      out = std::max(out, part);
    } else {
      out += law.weights()[k] * part;
    }
  }
  return out;
}

double float_part_norm(const DiscreteDistribution& law, const Rational& c, NormOrder order, bool positive) {
  if (exact_order(order)) return to_double(exact_part_norm(law, c, order, positive));
  double total = 0;
  for (std::size_t k = 0; k < law.size(); ++k) {
    const double part = to_double(positive ? Rational(law.points()[k] - c) : Rational(c - law.points()[k]));
    if (part > 0) total += to_double(law.weights()[k]) * std::pow(part, order.p);
  }
  return std::pow(total, 1.0 / order.p);
}

// One side of an inequality, kept exactly when the order allows it.
struct Side {
  Rational exact;
  double value = 0;
};

Side part_norm(const DiscreteDistribution& law, const Rational& c, NormOrder order, bool positive) {
  if (exact_order(order)) {
    Side s{exact_part_norm(law, c, order, positive), 0};
    s.value = to_double(s.exact);
    return s;
  }
  return {0, float_part_norm(law, c, order, positive)};
}

Side scaled_sum(const std::vector<Side>& terms, const Rational& factor) {
  Side out;
  for (const auto& t : terms) {
    out.exact += t.exact;
    out.value += t.value;
  }
  out.exact *= factor;
  out.value *= to_double(factor);
  return out;
}

bool exceeds(const Side& lhs, const Side& rhs, NormOrder order, bool exact_mode, double tolerance) {
  if (exact_order(order) && exact_mode) return lhs.exact > rhs.exact;
  return lhs.value > rhs.value + tolerance * std::max(1.0, std::abs(rhs.value));
}

bool all_exact(std::span<const DiscreteDistribution> marginals) {
  return std::all_of(marginals.begin(), marginals.end(), [](const auto& d) { return d.exact(); });
}

std::vector<double> doubles_of(const std::vector<Rational>& values) { return to_doubles(values); }

template <class Law>
const Law& law_of(const DistributionSpec& spec, const char* operation) {
  const auto* law = std::get_if<Law>(&spec.law);
  if (law == nullptr) throw InvalidInput(std::string(operation) + ": wrong spec type " + kind_name(spec));
  return *law;
}

std::string describe_interval(const Rational& lo, const Rational& hi) {
  return "[" + to_string(lo) + ", " + to_string(hi) + "]";
}

// Bounds of the sum used by the L-infinity screen: b_i - mu_i against the
// room the others leave below their centers, and the mirror inequality.
struct SupportScreen {
  bool violated = false;
  NormViolation violation;
};

SupportScreen support_screen(std::span<const DistributionSpec> specs, bool exact_mode, double tolerance) {
  const std::size_t n = specs.size();
  std::vector<SupportInterval> supports;
  std::vector<Rational> means;
  for (const auto& s : specs) {
    supports.push_back(essential_support(s));
    means.push_back(mean(s));
  }
  auto check = [&](bool upper) -> SupportScreen {
    for (std::size_t i = 0; i < n; ++i) {
      // lhs: ||(X_i - mu_i)_+||_inf (upper) or ||(X_i - mu_i)_-||_inf.
      const auto& own = upper ? supports[i].upper : supports[i].lower;
      std::optional<Rational> lhs;
      if (own) lhs = upper ? Rational(*own - means[i]) : Rational(means[i] - *own);
      std::optional<Rational> rhs = Rational(0);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const auto& other = upper ? supports[j].lower : supports[j].upper;
        if (!other) {
          rhs.reset();
          break;
        }
        *rhs += upper ? Rational(means[j] - *other) : Rational(*other - means[j]);
      }
      if (!rhs) continue;
      bool violated = false;
      if (!lhs) {
        violated = true;
      } else if (exact_mode) {
        violated = *lhs > *rhs;
      } else {
        violated = to_double(*lhs) > to_double(*rhs) + tolerance * std::max(1.0, std::abs(to_double(*rhs)));
      }
      if (violated) {
        SupportScreen out{true, {}};
        out.violation.index = i;
        out.violation.p = std::numeric_limits<double>::infinity();
        out.violation.split = to_doubles(means);
        out.violation.inequality = upper ? 1 : 2;
        out.violation.lhs = lhs ? to_double(*lhs) : std::numeric_limits<double>::infinity();
        out.violation.rhs = to_double(*rhs);
        return out;
      }
    }
    return {};
  };
  if (auto s = check(true); s.violated) return s;
  return check(false);
}

bool degenerate(const DistributionSpec& spec) {
  const auto support = essential_support(spec);
  return support.bounded() && *support.lower == *support.upper;
}

void append(std::string& diagnostic, const std::string& note) {
  if (note.empty()) return;
  if (!diagnostic.empty()) diagnostic += "; ";
  diagnostic += note;
}

std::vector<DistributionSpec> expand_marginals(std::span<const DistributionSpec> specs, const DecideOptions& options) {
  if (specs.empty()) throw InvalidInput("at least one marginal is required");
  std::vector<DistributionSpec> out;
  if (options.n) {
    if (*options.n == 0) throw InvalidInput("n must be at least 1");
    if (specs.size() == 1) {
      out.assign(*options.n, specs.front());
      return out;
    }
    if (*options.n != specs.size()) {
      throw InvalidInput("n = " + std::to_string(*options.n) + " does not match " + std::to_string(specs.size()) +
                         " marginals");
    }
  }
  out.assign(specs.begin(), specs.end());
  return out;
}

std::optional<std::vector<DiscreteDistribution>> discretes_of(std::span<const DistributionSpec> specs) {
  std::vector<DiscreteDistribution> out;
  for (const auto& s : specs) {
    const auto* d = std::get_if<DiscreteDistribution>(&s.law);
    if (d == nullptr) return std::nullopt;
    out.push_back(*d);
  }
  return out;
}

}  // namespace

bool mean_condition(const SupportInterval& support, const Rational& mu, std::size_t n) {
  if (n == 0) throw InvalidInput("mean condition needs n >= 1");
  if (!support.bounded()) throw InvalidInput("mean condition needs bounded support; use the norm screens instead");
  const Rational& a = *support.lower;
  const Rational& b = *support.upper;
  const Rational step = (b - a) / static_cast<long>(n);
  return a + step <= mu && mu <= b - step;
}

Verdict cm_monotone_density(const DistributionSpec& spec, std::size_t n) {
  const auto& m = law_of<MonotoneDensity>(spec, "cm_monotone_density");
  if (n == 0) throw InvalidInput("n must be at least 1");
  const std::string diag = "mean " + to_string(m.mean) + " on " + describe_interval(m.a, m.b) + ", n = " +
                           std::to_string(n);
  if (mean_condition(SupportInterval{m.a, m.b}, m.mean, n)) return Verdict::mixable("monotone-density", {}, diag);
  return Verdict::not_mixable("monotone-density", {}, diag);
}

Verdict cm_concave_density(const DistributionSpec& spec, std::size_t n) {
  law_of<ConcaveDensity>(spec, "cm_concave_density");
  if (n >= 3) return Verdict::mixable("concave-density", {}, "n = " + std::to_string(n) + " >= 3");
  return Verdict::unknown("concave-density", "the concave-density result needs n >= 3");
}

Verdict cm_density_floor(const DistributionSpec& spec, std::size_t n) {
  const auto& f = law_of<BoundedBelowDensity>(spec, "cm_density_floor");
  if (n == 0) throw InvalidInput("n must be at least 1");
  if (!(f.a < f.b)) throw InvalidInput("cm_density_floor: requires a < b");
  const Rational needed = Rational(3) / (Rational(static_cast<long>(n)) * (f.b - f.a));
  const std::string diag = "floor " + to_string(f.density_floor) + ", needed " + to_string(needed);
  if (f.density_floor >= needed) return Verdict::mixable("density-floor", {}, diag);
  return Verdict::unknown("density-floor", diag);
}

Verdict jm_monotone_densities(std::span<const DistributionSpec> specs) {
  if (specs.empty()) throw InvalidInput("at least one marginal is required");
  bool increasing = false;
  bool decreasing = false;
  Rational sum_a = 0;
  Rational sum_b = 0;
  Rational sum_mu = 0;
  Rational span = 0;
  for (const auto& spec : specs) {
    Rational a, b, mu;
    if (const auto* m = std::get_if<MonotoneDensity>(&spec.law)) {
      (m->direction == Direction::Increasing ? increasing : decreasing) = true;
      a = m->a;
      b = m->b;
      mu = m->mean;
    } else if (const auto* u = std::get_if<Uniform>(&spec.law)) {
      a = u->a;
      b = u->b;
      mu = (u->a + u->b) / 2;
    } else {
      throw InvalidInput("jm_monotone_densities: wrong spec type " + kind_name(spec));
    }
    sum_a += a;
    sum_b += b;
    sum_mu += mu;
    span = std::max(span, Rational(b - a));
  }
  if (increasing && decreasing) {
    return Verdict::unknown("monotone-densities", "densities do not share a direction");
  }
  std::ostringstream diag;
  diag << "sum mu = " << to_string(sum_mu) << ", window " << describe_interval(sum_a + span, sum_b - span);
  if (sum_a + span <= sum_mu && sum_mu <= sum_b - span) return Verdict::mixable("monotone-densities", {}, diag.str());
  return Verdict::not_mixable("monotone-densities", {}, diag.str());
}

Verdict jm_elliptical(std::span<const DistributionSpec> specs) {
  if (specs.empty()) throw InvalidInput("at least one marginal is required");
  std::optional<std::string> tag;
  std::vector<Rational> mus;
  std::vector<Rational> sigmas;
  for (const auto& spec : specs) {
    std::string this_tag;
    if (const auto* e = std::get_if<Elliptical>(&spec.law)) {
      this_tag = e->generator == "gaussian" ? "normal" : e->generator;
      mus.push_back(e->mu);
      sigmas.push_back(e->sigma);
    } else if (const auto* g = std::get_if<Normal>(&spec.law)) {
      this_tag = "normal";
      mus.push_back(g->mu);
      sigmas.push_back(g->sigma);
    } else {
      throw InvalidInput("jm_elliptical: wrong spec type " + kind_name(spec));
    }
    if (tag && *tag != this_tag) throw InvalidInput("jm_elliptical: generators differ (" + *tag + ", " + this_tag + ")");
    tag = this_tag;
  }
  if (*tag == "normal") {
    Verdict v = gaussian_joint_mix(mus, sigmas);
    v.reason = "elliptical-variance";
    return v;
  }
  Rational total = 0;
  Rational largest = 0;
  for (const auto& s : sigmas) {
    total += s;
    largest = std::max(largest, s);
  }
  const std::string diag = "sum sigma = " + to_string(total) + ", 2 max sigma = " + to_string(Rational(2 * largest));
  if (total >= 2 * largest) return Verdict::mixable("elliptical-variance", {}, diag);
  return Verdict::not_mixable("elliptical-variance", {}, diag);
}

double positive_part_norm(const DiscreteDistribution& law, const Rational& c, NormOrder order) {
  if (!(order.p >= 1)) throw InvalidInput("norm order must be >= 1");
  return float_part_norm(law, c, order, true);
}

double negative_part_norm(const DiscreteDistribution& law, const Rational& c, NormOrder order) {
  if (!(order.p >= 1)) throw InvalidInput("norm order must be >= 1");
  return float_part_norm(law, c, order, false);
}

NormCheckReport norm_check(std::span<const DiscreteDistribution> marginals, const Rational& K,
                           const NormCheckOptions& options) {
  const std::size_t n = marginals.size();
  if (n == 0) throw InvalidInput("at least one marginal is required");
  for (const auto& order : options.p_grid) {
    if (!(order.p >= 1)) throw InvalidInput("norm order must be >= 1");
  }
  const bool exact_mode = all_exact(marginals);

  std::vector<std::vector<Rational>> splits;
  if (options.include_mean_split) {
    std::vector<Rational> means;
    Rational total = 0;
    for (const auto& m : marginals) {
      means.push_back(m.mean());
      total += means.back();
    }
    // Shift the mean split onto K when the caller asks about another center.
    if (total != K) means.back() += K - total;
    splits.push_back(std::move(means));
  }
  for (const auto& split : options.splits) {
    if (split.size() != n) throw InvalidInput("split length differs from the number of marginals");
    Rational total = 0;
    for (const auto& v : split) total += v;
    if (total != K) throw InvalidInput("split sums to " + to_string(total) + ", not K = " + to_string(K));
    splits.push_back(split);
  }

  NormCheckReport report;
  for (const auto& order : options.p_grid) report.p_grid.push_back(order.p);
  report.splits_checked = splits.size();

  for (const auto& split : splits) {
    for (const auto& order : options.p_grid) {
      std::vector<Side> pos;
      std::vector<Side> neg;
      for (std::size_t i = 0; i < n; ++i) {
        pos.push_back(part_norm(marginals[i], split[i], order, true));
        neg.push_back(part_norm(marginals[i], split[i], order, false));
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (int which = 1; which <= 2; ++which) {
          const auto& lhs = which == 1 ? pos[i] : neg[i];
          std::vector<Side> others;
          for (std::size_t j = 0; j < n; ++j) {
            if (j != i) others.push_back(which == 1 ? neg[j] : pos[j]);
          }
          const Side rhs = scaled_sum(others, 1);
          if (exceeds(lhs, rhs, order, exact_mode, options.tolerance)) {
            report.violations.push_back({i, order.p, doubles_of(split), std::nullopt, which, lhs.value, rhs.value});
          }
        }
      }
    }
  }

  const bool identical = n >= 2 && std::all_of(marginals.begin(), marginals.end(), [&](const auto& m) {
    return m.points() == marginals.front().points() && m.weights() == marginals.front().weights();
  });
  if (identical) {
    report.complete_mix_form = true;
    const auto& law = marginals.front();
    const Rational mu = K / static_cast<long>(n);
    std::vector<Rational> levels = options.t_grid;
    if (levels.empty()) {
      levels = law.points();
      levels.push_back(mu);
      std::sort(levels.begin(), levels.end());
      levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    }
    report.t_grid = to_doubles(levels);
    const Rational copies = static_cast<long>(n - 1);
    for (const auto& t : levels) {
      const Rational s = (static_cast<long>(n) * mu - t) / copies;
      for (const auto& order : options.p_grid) {
        for (int which = 1; which <= 2; ++which) {
          const Side lhs = part_norm(law, t, order, which == 1);
          const Side rhs = scaled_sum({part_norm(law, s, order, which != 1)}, copies);
          if (exceeds(lhs, rhs, order, exact_mode, options.tolerance)) {
            report.violations.push_back(
                {std::nullopt, order.p, std::vector<double>(n, to_double(mu)), to_double(t), which, lhs.value, rhs.value});
          }
        }
      }
    }
  }
  return report;
}

Validation verify_norm_violation(std::span<const DiscreteDistribution> marginals, const NormViolation& v,
                                 double tolerance) {
  const std::size_t n = marginals.size();
  if (n == 0) return Validation::fail("no marginals");
  if (!(v.p >= 1)) return Validation::fail("norm order below 1");
  if (v.inequality != 1 && v.inequality != 2) return Validation::fail("inequality must be 1 or 2");
  const NormOrder order{v.p};
  const bool positive = v.inequality == 1;
  double lhs = 0;
  double rhs = 0;
  if (v.index) {
    if (*v.index >= n || v.split.size() != n) return Validation::fail("index or split out of range");
    for (std::size_t j = 0; j < n; ++j) {
      const Rational c = rational_from_double(v.split[j]);
      if (j == *v.index) {
        lhs = float_part_norm(marginals[j], c, order, positive);
      } else {
        rhs += float_part_norm(marginals[j], c, order, !positive);
      }
    }
  } else {
    if (!v.t || n < 2 || v.split.empty()) return Validation::fail("complete-mix violation needs t and n >= 2");
    const Rational mu = rational_from_double(v.split.front());
    const Rational t = rational_from_double(*v.t);
    const Rational s = (static_cast<long>(n) * mu - t) / static_cast<long>(n - 1);
    lhs = float_part_norm(marginals.front(), t, order, positive);
    rhs = static_cast<double>(n - 1) * float_part_norm(marginals.front(), s, order, !positive);
  }
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  if (std::abs(lhs - v.lhs) > 1e-9 * scale || std::abs(rhs - v.rhs) > 1e-9 * scale) {
    return Validation::fail("recomputed norms differ from the report");
  }
  if (!(lhs > rhs) && tolerance >= 0) return Validation::fail("inequality holds on recomputation");
  return Validation::pass();
}

Verdict decide(std::span<const DistributionSpec> specs, const DecideOptions& options) {
  for (const auto& s : specs) validate(s);
  const auto marginals = expand_marginals(specs, options);
  const std::size_t n = marginals.size();
  const bool homogeneous =
      std::all_of(marginals.begin(), marginals.end(), [&](const auto& s) { return s == marginals.front(); });
  std::string notes;
  auto finish = [&](Verdict v) {
    append(v.diagnostic, notes);
    return v;
  };

  // Exact discrete path.
  const auto discretes = discretes_of(marginals);
  if (discretes) {
    if (all_exact(*discretes)) {
      try {
        Verdict v = jm_lp_decide(*discretes, std::nullopt, options.lp_budget);
        if (v.decisive()) return finish(std::move(v));
      } catch (const BudgetExceeded& e) {
        append(notes, std::string("lp skipped: ") + e.what());
      }
    }
    try {
      MatrixMixOptions mm;
      mm.budget = options.budget;
      mm.expansion_budget = options.expansion_budget;
      mm.restarts = options.restarts;
      mm.seed = options.seed;
      mm.tolerance = options.tolerance;
      Verdict v = jm_from_matrix(*discretes, mm);
      // A failed exhaustive search only rules out masses on the 1/m lattice;
      // for n >= 3 the joint law may need finer masses.
      if (v.status == Status::Mixable || (v.status == Status::NotMixable && discretes->size() <= 2)) {
        return finish(std::move(v));
      }
      append(notes, v.diagnostic);
    } catch (const BudgetExceeded& e) {
      append(notes, std::string("matrix path skipped: ") + e.what());
    }
  }

  // Conditions that are necessary and sufficient.
  auto is_kind = [&](auto pred) { return std::all_of(marginals.begin(), marginals.end(), pred); };
  const bool monotone_family = is_kind([](const DistributionSpec& s) {
    return std::holds_alternative<MonotoneDensity>(s.law) || std::holds_alternative<Uniform>(s.law);
  });
  if (monotone_family) {
    Verdict v = homogeneous && std::holds_alternative<MonotoneDensity>(marginals.front().law)
                    ? cm_monotone_density(marginals.front(), n)
                    : jm_monotone_densities(marginals);
    if (v.decisive()) return finish(std::move(v));
    append(notes, v.diagnostic);
  }
  const bool elliptical_family = is_kind([](const DistributionSpec& s) {
    return std::holds_alternative<Elliptical>(s.law) || std::holds_alternative<Normal>(s.law);
  });
  if (elliptical_family) {
    try {
      Verdict v = jm_elliptical(marginals);
      if (v.decisive()) return finish(std::move(v));
      append(notes, v.diagnostic);
    } catch (const InvalidInput& e) {
      append(notes, e.what());
    }
  }

  // Sufficient conditions for identical marginals.
  if (homogeneous && n >= 2) {
    const auto& spec = marginals.front();
    const bool symmetric = spec.symmetric_unimodal || std::holds_alternative<Uniform>(spec.law) ||
                           std::holds_alternative<Normal>(spec.law);
    if (symmetric) {
      return finish(Verdict::mixable("symmetric-unimodal", {}, "symmetric unimodal density, n = " + std::to_string(n)));
    }
    if (std::holds_alternative<ConcaveDensity>(spec.law)) {
      Verdict v = cm_concave_density(spec, n);
      if (v.decisive()) return finish(std::move(v));
      append(notes, v.diagnostic);
    }
    if (std::holds_alternative<BoundedBelowDensity>(spec.law)) {
      Verdict v = cm_density_floor(spec, n);
      if (v.decisive()) return finish(std::move(v));
      append(notes, v.diagnostic);
    }
  }

  // Necessary screens.
  if (n == 1 && !degenerate(marginals.front()) && !discretes) {
    return finish(Verdict::not_mixable("single-marginal", {}, "one marginal is mixable only as a point mass"));
  }
  if (is_kind([](const DistributionSpec& s) { return has_mean(s); })) {
    const bool exact_mode = is_kind([](const DistributionSpec& s) { return is_rational(s); });
    const auto screen = support_screen(marginals, exact_mode, options.tolerance);
    if (screen.violated) {
      const bool mean_form = homogeneous && essential_support(marginals.front()).bounded();
      return finish(Verdict::not_mixable(mean_form ? "mean-condition" : "support-norm", screen.violation,
                                         mean_form ? "mean condition fails" : "L-infinity norm inequality fails"));
    }
  }
  if (discretes) {
    Rational K = 0;
    for (const auto& d : *discretes) K += d.mean();
    const auto report = norm_check(*discretes, K, options.norm);
    if (!report.ok()) {
      return finish(Verdict::not_mixable("norm-inequality", report.violations.front(),
                                         std::to_string(report.violations.size()) + " norm violations"));
    }
  }
  return finish(Verdict::unknown("no-condition-applies"));
}

Validation verify_verdict(std::span<const DistributionSpec> specs, const Verdict& verdict,
                          const DecideOptions& options) {
  const auto marginals = expand_marginals(specs, options);
  const auto discretes = discretes_of(marginals);
  auto need_discretes = [&]() -> const std::vector<DiscreteDistribution>& {
    if (!discretes) throw InvalidInput("certificate requires discrete marginals");
    return *discretes;
  };
  try {
    return std::visit(
        Overloaded{
            [](const std::monostate&) { return Validation::pass(); },
            [&](const ArrangementCertificate& c) {
              const auto& ds = need_discretes();
              if (c.columns.size() != ds.size() || c.columns.empty()) return Validation::fail("column count mismatch");
              const std::size_t m = c.columns.front().size();
              if (!is_valid(c.arrangement, m, ds.size())) return Validation::fail("invalid arrangement");
              for (std::size_t j = 0; j < ds.size(); ++j) {
                if (c.columns[j].size() != m) return Validation::fail("ragged columns");
                const auto column = equal_weight(c.columns[j]);
                if (column.points() != ds[j].points() || column.weights() != ds[j].weights()) {
                  return Validation::fail("column " + std::to_string(j) + " does not reproduce its marginal");
                }
              }
              for (std::size_t i = 0; i < m; ++i) {
                Rational sum = 0;
                for (std::size_t j = 0; j < ds.size(); ++j) sum += c.columns[j][c.arrangement.perms[j][i]];
                if (all_exact(ds) ? sum != c.center
                                  : std::abs(to_double(sum - c.center)) > options.tolerance * std::max(1.0, std::abs(to_double(c.center)))) {
                  return Validation::fail("row " + std::to_string(i) + " misses the center");
                }
              }
              return Validation::pass();
            },
            [&](const JointPmf& p) { return verify_primal(need_discretes(), p); },
            [&](const DualCertificate& d) { return verify_dual(need_discretes(), d, d.center, options.lp_budget); },
            [&](const UniformBlockMixture& b) {
              const auto& ds = need_discretes();
              if (!b.blocks.empty() && b.blocks.front().size() != ds.size()) return Validation::fail("block size differs from n");
              return verify_block_mixture(ds.front(), b);
            },
            [&](const GaussianMixCertificate& g) {
              if (g.sigmas.size() != marginals.size()) return Validation::fail("dimension mismatch");
              for (std::size_t i = 0; i < marginals.size(); ++i) {
                Rational mu, sigma;
                if (const auto* e = std::get_if<Elliptical>(&marginals[i].law)) {
                  mu = e->mu;
                  sigma = e->sigma;
                } else if (const auto* nl = std::get_if<Normal>(&marginals[i].law)) {
                  mu = nl->mu;
                  sigma = nl->sigma;
                } else {
                  return Validation::fail("Gaussian certificate for a non-elliptical marginal");
                }
                if (g.mus[i] != to_double(mu) || g.sigmas[i] != to_double(sigma)) {
                  return Validation::fail("parameters of marginal " + std::to_string(i) + " differ");
                }
              }
              return verify_gaussian(g);
            },
            [&](const NormViolation& v) {
              if (discretes) return verify_norm_violation(*discretes, v, options.tolerance);
              return v.lhs > v.rhs ? Validation::pass() : Validation::fail("reported violation is not one");
            },
        },
        verdict.certificate);
  } catch (const Error& e) {
    return Validation::fail(e.what());
  }
}

}  // namespace mix
