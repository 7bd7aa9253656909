#include "mix/riskbounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/normal.hpp>

#include "mix/error.hpp"

namespace mix {
namespace {

void check_level(const Rational& p) {
  if (!(p > 0 && p < 1)) throw InvalidInput("level p must lie in (0, 1)");
}

double normal_density_at_level(const Rational& q) {
  if (q <= 0 || q >= 1) return 0.0;
  const boost::math::normal_distribution<double> unit;
  return boost::math::pdf(unit, boost::math::quantile(unit, to_double(q)));
}

// Exact int_lo^hi VaR_q dq for discrete laws.
Rational discrete_window_integral(const DiscreteDistribution& d, const ProbabilityWindow& w) {
  Rational total = 0;
  Rational below = 0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const Rational above = below + d.weights()[k];
    const Rational overlap = std::min(above, w.hi) - std::max(below, w.lo);
    if (overlap > 0) total += overlap * d.points()[k];
    below = above;
  }
  return total;
}

// int_lo^hi of a piecewise-linear quantile: the midpoint rule is exact on
// every segment between consecutive breakpoints.
double table_window_integral(const DistributionSpec& spec, const QuantileTable& t, const ProbabilityWindow& w) {
  const double lo = to_double(w.lo);
  const double hi = to_double(w.hi);
  std::vector<double> cuts{lo, hi};
  for (const double q : t.q) {
    if (q > lo && q < hi) cuts.push_back(q);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0;
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    const double width = cuts[k] - cuts[k - 1];
    if (width > 0) total += width * quantile(spec, 0.5 * (cuts[k] + cuts[k - 1]));
  }
  return total;
}

BoundValue window_integral(const DistributionSpec& spec, const ProbabilityWindow& w) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&spec.law)) {
    const Rational v = discrete_window_integral(*d, w);
    return {to_double(v), d->exact() ? std::optional<Rational>(v) : std::nullopt};
  }
  if (const auto* u = std::get_if<Uniform>(&spec.law)) {
    const Rational v = u->a * (w.hi - w.lo) + (u->b - u->a) * (w.hi * w.hi - w.lo * w.lo) / 2;
    return {to_double(v), v};
  }
  auto normal_integral = [&](const Rational& mu, const Rational& sigma) -> BoundValue {
    if (sigma == 0) {
      const Rational v = mu * (w.hi - w.lo);
      return {to_double(v), v};
    }
    return {to_double(mu) * to_double(w.hi - w.lo) +
                to_double(sigma) * (normal_density_at_level(w.lo) - normal_density_at_level(w.hi)),
            std::nullopt};
  };
  if (const auto* n = std::get_if<Normal>(&spec.law)) return normal_integral(n->mu, n->sigma);
  if (const auto* e = std::get_if<Elliptical>(&spec.law)) {
    if (e->sigma == 0 || e->generator == "normal" || e->generator == "gaussian") return normal_integral(e->mu, e->sigma);
  }
  if (const auto* t = std::get_if<QuantileTable>(&spec.law)) return {table_window_integral(spec, *t, w), std::nullopt};
  if (const auto* m = std::get_if<MonotoneDensity>(&spec.law); m != nullptr && m->table) {
    return {table_window_integral(spec, *m->table, w), std::nullopt};
  }
  throw InvalidInput(kind_name(spec) + ": tail integral not computable from the stored parameters");
}

BoundValue window_average(std::span<const DistributionSpec> specs, const ProbabilityWindow& w) {
  if (specs.empty()) throw InvalidInput("at least one marginal is required");
  BoundValue out;
  std::optional<Rational> exact = Rational(0);
  double value = 0;
  for (const auto& s : specs) {
    const auto part = window_integral(s, w);
    value += part.value;
    if (exact && part.exact) {
      *exact += *part.exact;
    } else {
      exact.reset();
    }
  }
  const Rational width = w.hi - w.lo;
  if (exact) {
    out.exact = *exact / width;
    out.value = to_double(*out.exact);
  } else {
    out.value = value / to_double(width);
  }
  return out;
}

// VaR_p of a single marginal, exact where the law allows it.
double value_at_risk(const DistributionSpec& spec, const Rational& p) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&spec.law)) return to_double(quantile(*d, p));
  if (const auto* u = std::get_if<Uniform>(&spec.law)) return to_double(Rational(u->a + (u->b - u->a) * p));
  return quantile(spec, to_double(p));
}

std::optional<std::vector<Rational>> exact_grid(const DistributionSpec& spec, std::size_t count,
                                                const ProbabilityWindow& window) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&spec.law); d != nullptr && d->exact()) {
    return quantile_grid(*d, count, window);
  }
  if (const auto* u = std::get_if<Uniform>(&spec.law)) {
    std::vector<Rational> out;
    for (const auto& q : midpoint_levels(count, window)) out.push_back(u->a + (u->b - u->a) * q);
    return out;
  }
  return std::nullopt;
}

double grid_mesh(const std::vector<double>& grid) {
  double mesh = 0;
  for (std::size_t k = 1; k < grid.size(); ++k) mesh = std::max(mesh, grid[k] - grid[k - 1]);
  return mesh;
}

bool unbounded_toward(const DistributionSpec& spec, bool upper) {
  const auto support = essential_support(spec);
  return upper ? !support.upper.has_value() : !support.lower.has_value();
}

Verdict tail_jm(std::span<const DistributionSpec> specs, const ProbabilityWindow& window, bool upper,
                const DecideOptions& options) {
  std::vector<DistributionSpec> tails;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    auto tail = tail_conditional(specs[i], window);
    if (!tail) {
      if (unbounded_toward(specs[i], upper)) {
        return Verdict::not_mixable(
            "unbounded-tail", {},
            "tail-conditional marginal " + std::to_string(i) +
                (upper ? " is unbounded above while every tail is bounded below"
                       : " is unbounded below while every tail is bounded above"));
      }
      return Verdict::unknown("tail-not-representable",
                              "tail-conditional law of marginal " + std::to_string(i) + " has no spec form");
    }
    tails.push_back(std::move(*tail));
  }
  DecideOptions opts = options;
  opts.n.reset();
  return decide(tails, opts);
}

SideReport estimate_side(std::span<const DistributionSpec> specs, const Rational& p, bool upper,
                         const RiskBoundOptions& options) {
  check_level(p);
  const ProbabilityWindow window = upper ? ProbabilityWindow::upper_tail(p) : ProbabilityWindow::lower_tail(p);
  SideReport report;
  report.bound = window_average(specs, window);

  if (specs.size() == 1) {
    report.estimate = value_at_risk(specs.front(), p);
    report.diagnostics.method = "single-marginal";
  } else {
    if (options.grid < 2) throw InvalidInput("grid size must be at least 2");
    std::vector<std::vector<double>> columns;
    for (const auto& spec : specs) {
      auto column = quantile_grid(spec, options.grid, window);
      report.epsilon += grid_mesh(column) / 2;
      if (upper) {
        for (double& x : column) x = -x;
      }
      columns.push_back(std::move(column));
    }
    const MatrixInstance<double> instance(std::move(columns));
    auto result = local_search(instance, Objective::Minimax, options.restarts, options.seed, options.search);
    report.estimate = upper ? -result.value : result.value;
    report.diagnostics = std::move(result.diagnostics);
  }
  report.tail_verdict = tail_jm(specs, window, upper, options.decide);
  report.sharp = report.tail_verdict.status == Status::Mixable;
  return report;
}

}  // namespace

BoundValue phi_upper_bound(std::span<const DistributionSpec> specs, const Rational& p) {
  check_level(p);
  return window_average(specs, ProbabilityWindow::upper_tail(p));
}

BoundValue psi_lower_bound(std::span<const DistributionSpec> specs, const Rational& p) {
  check_level(p);
  return window_average(specs, ProbabilityWindow::lower_tail(p));
}

std::optional<DistributionSpec> tail_conditional(const DistributionSpec& spec, const ProbabilityWindow& window) {
  midpoint_levels(1, window);  // validates the window
  const Rational width = window.hi - window.lo;
  if (const auto* d = std::get_if<DiscreteDistribution>(&spec.law)) {
    std::vector<Rational> points;
    std::vector<Rational> weights;
    Rational below = 0;
    for (std::size_t k = 0; k < d->size(); ++k) {
      const Rational above = below + d->weights()[k];
      const Rational overlap = std::min(above, window.hi) - std::max(below, window.lo);
      if (overlap > 0) {
        points.push_back(d->points()[k]);
        weights.push_back(overlap / width);
      }
      below = above;
    }
    return discrete(make_discrete(points, weights, d->exact()));
  }
  if (const auto* u = std::get_if<Uniform>(&spec.law)) {
    return uniform(u->a + (u->b - u->a) * window.lo, u->a + (u->b - u->a) * window.hi);
  }
  auto point = [](const Rational& at) { return discrete(point_mass(at)); };
  if (const auto* n = std::get_if<Normal>(&spec.law)) {
    if (n->sigma == 0) return point(n->mu);
    return std::nullopt;
  }
  if (const auto* e = std::get_if<Elliptical>(&spec.law)) {
    if (e->sigma == 0) return point(e->mu);
    return std::nullopt;
  }
  auto table_tail = [&](const QuantileTable& t) {
    const double lo = to_double(window.lo);
    const double hi = to_double(window.hi);
    QuantileTable out;
    out.q.push_back(0.0);
    out.x.push_back(window.lo == 0 ? t.x.front() : quantile(spec, lo));
    for (std::size_t k = 0; k < t.q.size(); ++k) {
      if (t.q[k] > lo && t.q[k] < hi) {
        out.q.push_back((t.q[k] - lo) / (hi - lo));
        out.x.push_back(t.x[k]);
      }
    }
    out.q.push_back(1.0);
    out.x.push_back(window.hi == 1 ? t.x.back() : quantile(spec, hi));
    return out;
  };
  if (const auto* t = std::get_if<QuantileTable>(&spec.law)) {
    auto tail = table_tail(*t);
    return quantile_table(std::move(tail.q), std::move(tail.x));
  }
  if (const auto* m = std::get_if<MonotoneDensity>(&spec.law); m != nullptr && m->table) {
    // The tail of a monotone density is monotone in the same direction.
    auto tail = table_tail(*m->table);
    const Rational a = rational_from_double(tail.x.front());
    const Rational b = rational_from_double(tail.x.back());
    if (!(a < b)) return point(a);
    const Rational mu = rational_from_double(window_integral(spec, window).value / to_double(width));
    if (!(a < mu && mu < b)) return std::nullopt;
    return monotone_density(a, b, mu, m->direction, std::move(tail));
  }
  return std::nullopt;
}

RiskBoundReport wvar_estimate(std::span<const DistributionSpec> specs, const Rational& p,
                              const RiskBoundOptions& options) {
  return var_bounds(specs, p, BoundSide::Worst, options);
}

RiskBoundReport bvar_estimate(std::span<const DistributionSpec> specs, const Rational& p,
                              const RiskBoundOptions& options) {
  return var_bounds(specs, p, BoundSide::Best, options);
}

RiskBoundReport var_bounds(std::span<const DistributionSpec> specs, const Rational& p, BoundSide side,
                           const RiskBoundOptions& options) {
  if (specs.empty()) throw InvalidInput("at least one marginal is required");
  for (const auto& s : specs) validate(s);
  check_level(p);
  RiskBoundReport report;
  report.p = p;
  report.grid = options.grid;
  if (side != BoundSide::Best) report.worst = estimate_side(specs, p, true, options);
  if (side != BoundSide::Worst) report.best = estimate_side(specs, p, false, options);
  return report;
}

DiscreteDistribution comonotone_sum(std::span<const DistributionSpec> specs, std::size_t count) {
  if (specs.empty()) throw InvalidInput("at least one marginal is required");
  const auto window = ProbabilityWindow::whole();
  std::vector<std::vector<Rational>> exact;
  for (const auto& s : specs) {
    auto grid = exact_grid(s, count, window);
    if (!grid) break;
    exact.push_back(std::move(*grid));
  }
  if (exact.size() == specs.size()) {
    std::vector<Rational> sums(count, Rational(0));
    for (const auto& grid : exact) {
      for (std::size_t k = 0; k < count; ++k) sums[k] += grid[k];
    }
    return equal_weight(sums, true);
  }
  std::vector<double> sums(count, 0.0);
  for (const auto& s : specs) {
    const auto grid = quantile_grid(s, count, window);
    for (std::size_t k = 0; k < count; ++k) sums[k] += grid[k];
  }
  std::vector<Rational> points;
  points.reserve(count);
  for (const double x : sums) points.push_back(rational_from_double(x));
  return equal_weight(points, false);
}

Rational stop_loss(const DiscreteDistribution& law, const Rational& t) {
  Rational total = 0;
  for (std::size_t k = 0; k < law.size(); ++k) {
    if (law.points()[k] > t) total += law.weights()[k] * (law.points()[k] - t);
  }
  return total;
}

StopLossCurve stop_loss_curve(const DiscreteDistribution& law) {
  StopLossCurve curve;
  for (const auto& t : law.points()) {
    curve.t.push_back(t);
    curve.value.push_back(stop_loss(law, t));
  }
  return curve;
}

bool convex_order_leq(const DiscreteDistribution& s1, const DiscreteDistribution& s2, double tolerance) {
  const bool exact = s1.exact() && s2.exact();
  auto leq = [&](const Rational& a, const Rational& b) {
    if (exact) return a <= b;
    return to_double(a) <= to_double(b) + tolerance * std::max(1.0, std::abs(to_double(b)));
  };
  const Rational m1 = s1.mean();
  const Rational m2 = s2.mean();
  if (!(leq(m1, m2) && leq(m2, m1))) return false;
  std::vector<Rational> grid = s1.points();
  grid.insert(grid.end(), s2.points().begin(), s2.points().end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return std::all_of(grid.begin(), grid.end(), [&](const Rational& t) { return leq(stop_loss(s1, t), stop_loss(s2, t)); });
}

}  // namespace mix
