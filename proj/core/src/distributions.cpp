#include "mix/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "mix/error.hpp"

namespace mix {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool gaussian_tag(const std::string& tag) { return tag == "normal" || tag == "gaussian"; }

double normal_quantile(double mu, double sigma, double q) {
  if (sigma == 0.0) return mu;
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  return mu + sigma * boost::math::quantile(boost::math::normal_distribution<double>(), q);
}

double table_quantile(const QuantileTable& t, double q) {
  if (q <= t.q.front()) return t.x.front();
  if (q >= t.q.back()) return t.x.back();
  const auto it = std::lower_bound(t.q.begin(), t.q.end(), q);
  const auto hi = static_cast<std::size_t>(it - t.q.begin());
  if (t.q[hi] == q) {
    // Left-continuous: the first knot at this level.
    return t.x[hi];
  }
  const std::size_t lo = hi - 1;
  const double w = (q - t.q[lo]) / (t.q[hi] - t.q[lo]);
  return t.x[lo] + w * (t.x[hi] - t.x[lo]);
}

double table_mean(const QuantileTable& t) {
  double total = t.x.front() * t.q.front() + t.x.back() * (1.0 - t.q.back());
  for (std::size_t k = 1; k < t.q.size(); ++k) total += 0.5 * (t.x[k] + t.x[k - 1]) * (t.q[k] - t.q[k - 1]);
  return total;
}

void check_interval(const Rational& a, const Rational& b, const char* what) {
  if (!(a < b)) throw InvalidInput(std::string(what) + ": requires a < b");
}

}  // namespace

Rational DiscreteDistribution::mean() const {
  Rational total = 0;
  for (std::size_t k = 0; k < points_.size(); ++k) total += points_[k] * weights_[k];
  return total;
}

DiscreteDistribution DiscreteDistribution::as_float() const {
  DiscreteDistribution copy = *this;
  copy.exact_ = false;
  return copy;
}

DiscreteDistribution make_discrete(std::span<const Rational> points, std::span<const Rational> weights, bool exact) {
  if (points.empty()) throw InvalidInput("discrete distribution: empty support");
  if (points.size() != weights.size()) throw InvalidInput("discrete distribution: points and weights differ in length");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return points[l] < points[r]; });
  Rational total = 0;
  for (const auto& w : weights) {
    if (w <= 0) throw InvalidInput("discrete distribution: weights must be positive");
    total += w;
  }
  DiscreteDistribution d;
  d.exact_ = exact;
  for (const std::size_t k : order) {
    if (!d.points_.empty() && d.points_.back() == points[k]) {
      d.weights_.back() += weights[k];
    } else {
      d.points_.push_back(points[k]);
      d.weights_.push_back(weights[k]);
    }
  }
  if (total != 1) {
    for (auto& w : d.weights_) w /= total;
  }
  return d;
}

DiscreteDistribution make_discrete(std::span<const double> points, std::span<const double> weights) {
  std::vector<Rational> p;
  std::vector<Rational> w;
  p.reserve(points.size());
  w.reserve(weights.size());
  for (const double x : points) {
    if (!std::isfinite(x)) throw InvalidInput("discrete distribution: points must be finite");
    p.emplace_back(x);
  }
  for (const double x : weights) {
    if (!std::isfinite(x)) throw InvalidInput("discrete distribution: weights must be finite");
    w.emplace_back(x);
  }
  return make_discrete(p, w, false);
}

DiscreteDistribution point_mass(const Rational& at) {
  const Rational one = 1;
  return make_discrete(std::span<const Rational>(&at, 1), std::span<const Rational>(&one, 1));
}

DiscreteDistribution equal_weight(std::span<const Rational> atoms, bool exact) {
  if (atoms.empty()) throw InvalidInput("discrete distribution: empty support");
  const std::vector<Rational> weights(atoms.size(), Rational(1, static_cast<long>(atoms.size())));
  return make_discrete(atoms, weights, exact);
}

void validate(const DistributionSpec& spec) {
  std::visit(Overloaded{
                 [](const DiscreteDistribution&) {},
                 [](const Uniform& u) { check_interval(u.a, u.b, "uniform"); },
                 [](const MonotoneDensity& m) {
                   check_interval(m.a, m.b, "monotone density");
                   if (!(m.a < m.mean && m.mean < m.b)) throw InvalidInput("monotone density: mean must lie in (a, b)");
                   if (m.table) {
                     validate(DistributionSpec{*m.table});
                     const auto& t = *m.table;
                     const double scale = std::max(1.0, to_double(m.b) - to_double(m.a));
                     const double tol = 1e-9 * scale;
                     if (std::abs(t.x.front() - to_double(m.a)) > tol || std::abs(t.x.back() - to_double(m.b)) > tol) {
                       throw InvalidInput("monotone density: table must span [a, b]");
                     }
                     if (std::abs(table_mean(t) - to_double(m.mean)) > tol) {
                       throw InvalidInput("monotone density: table mean differs from the stated mean");
                     }
                   }
                 },
                 [](const ConcaveDensity& c) { check_interval(c.a, c.b, "concave density"); },
                 [](const BoundedBelowDensity& f) {
                   check_interval(f.a, f.b, "bounded-below density");
                   if (f.density_floor < 0) throw InvalidInput("bounded-below density: floor must be >= 0");
                   if (f.density_floor * (f.b - f.a) > 1) {
                     throw InvalidInput("bounded-below density: floor exceeds 1/(b - a)");
                   }
                 },
                 [](const Elliptical& e) {
                   if (e.sigma < 0) throw InvalidInput("elliptical: sigma must be >= 0");
                   if (e.generator.empty()) throw InvalidInput("elliptical: generator tag required");
                 },
                 [](const Normal& n) {
                   if (n.sigma < 0) throw InvalidInput("normal: sigma must be >= 0");
                 },
                 [](const QuantileTable& t) {
                   if (t.q.empty() || t.q.size() != t.x.size()) {
                     throw InvalidInput("quantile table: q and x must be non-empty and of equal length");
                   }
                   for (std::size_t k = 0; k < t.q.size(); ++k) {
                     if (!std::isfinite(t.q[k]) || !std::isfinite(t.x[k])) {
                       throw InvalidInput("quantile table: entries must be finite");
                     }
                     if (t.q[k] < 0 || t.q[k] > 1) throw InvalidInput("quantile table: levels must lie in [0, 1]");
                     if (k > 0 && !(t.q[k] > t.q[k - 1])) {
                       throw InvalidInput("quantile table: levels must be strictly increasing");
                     }
                     if (k > 0 && t.x[k] < t.x[k - 1]) throw InvalidInput("quantile table: values must be nondecreasing");
                   }
                 },
             },
             spec.law);
}

DistributionSpec discrete(DiscreteDistribution d) { return DistributionSpec{std::move(d)}; }

DistributionSpec uniform(Rational a, Rational b) {
  DistributionSpec s{Uniform{std::move(a), std::move(b)}};
  validate(s);
  return s;
}

DistributionSpec monotone_density(Rational a, Rational b, Rational mean, Direction direction,
                                  std::optional<QuantileTable> table) {
  DistributionSpec s{MonotoneDensity{std::move(a), std::move(b), std::move(mean), direction, std::move(table)}};
  validate(s);
  return s;
}

DistributionSpec concave_density(Rational a, Rational b) {
  DistributionSpec s{ConcaveDensity{std::move(a), std::move(b)}};
  validate(s);
  return s;
}

DistributionSpec bounded_below_density(Rational a, Rational b, Rational density_floor) {
  DistributionSpec s{BoundedBelowDensity{std::move(a), std::move(b), std::move(density_floor)}};
  validate(s);
  return s;
}

DistributionSpec elliptical(Rational mu, Rational sigma, std::string generator) {
  DistributionSpec s{Elliptical{std::move(mu), std::move(sigma), std::move(generator)}};
  validate(s);
  return s;
}

DistributionSpec normal(Rational mu, Rational sigma) {
  DistributionSpec s{Normal{std::move(mu), std::move(sigma)}};
  validate(s);
  return s;
}

DistributionSpec quantile_table(std::vector<double> q, std::vector<double> x) {
  DistributionSpec s{QuantileTable{std::move(q), std::move(x)}};
  validate(s);
  return s;
}

bool is_rational(const DistributionSpec& spec) {
  return std::visit(Overloaded{
                        [](const DiscreteDistribution& d) { return d.exact(); },
                        [](const Uniform&) { return true; },
                        [](const MonotoneDensity& m) { return !m.table.has_value(); },
                        [](const ConcaveDensity&) { return true; },
                        [](const BoundedBelowDensity&) { return true; },
                        [](const Elliptical& e) { return e.sigma == 0; },
                        [](const Normal& n) { return n.sigma == 0; },
                        [](const QuantileTable&) { return false; },
                    },
                    spec.law);
}

double SupportInterval::a() const {
  return lower ? to_double(*lower) : -std::numeric_limits<double>::infinity();
}

double SupportInterval::b() const {
  return upper ? to_double(*upper) : std::numeric_limits<double>::infinity();
}

SupportInterval essential_support(const DistributionSpec& spec) {
  return std::visit(Overloaded{
                        [](const DiscreteDistribution& d) { return SupportInterval{d.min(), d.max()}; },
                        [](const Uniform& u) { return SupportInterval{u.a, u.b}; },
                        [](const MonotoneDensity& m) { return SupportInterval{m.a, m.b}; },
                        [](const ConcaveDensity& c) { return SupportInterval{c.a, c.b}; },
                        [](const BoundedBelowDensity& f) { return SupportInterval{f.a, f.b}; },
                        [](const Elliptical& e) {
                          return e.sigma == 0 ? SupportInterval{e.mu, e.mu} : SupportInterval{};
                        },
                        [](const Normal& n) {
                          return n.sigma == 0 ? SupportInterval{n.mu, n.mu} : SupportInterval{};
                        },
                        [](const QuantileTable& t) {
                          return SupportInterval{rational_from_double(t.x.front()), rational_from_double(t.x.back())};
                        },
                    },
                    spec.law);
}

bool has_quantile(const DistributionSpec& spec) {
  return std::visit(Overloaded{
                        [](const MonotoneDensity& m) { return m.table.has_value(); },
                        [](const ConcaveDensity&) { return false; },
                        [](const BoundedBelowDensity&) { return false; },
                        [](const Elliptical& e) { return e.sigma == 0 || gaussian_tag(e.generator); },
                        [](const auto&) { return true; },
                    },
                    spec.law);
}

Rational quantile(const DiscreteDistribution& d, const Rational& q) {
  if (!(q > 0 && q <= 1)) throw InvalidInput("quantile level must lie in (0, 1]");
  Rational cumulative = 0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    cumulative += d.weights()[k];
    if (cumulative >= q) return d.points()[k];
  }
  return d.max();
}

double quantile(const DistributionSpec& spec, double q) {
  if (!(q > 0.0 && q <= 1.0)) throw InvalidInput("quantile level must lie in (0, 1]");
  auto unavailable = [](const char* what) -> double {
    throw InvalidInput(std::string(what) + ": quantile not computable from the stored parameters");
  };
  return std::visit(Overloaded{
                        [&](const DiscreteDistribution& d) { return to_double(quantile(d, rational_from_double(q))); },
                        [&](const Uniform& u) {
                          const double a = to_double(u.a);
                          return a + q * (to_double(u.b) - a);
                        },
                        [&](const MonotoneDensity& m) {
                          return m.table ? table_quantile(*m.table, q) : unavailable("monotone density");
                        },
                        [&](const ConcaveDensity&) { return unavailable("concave density"); },
                        [&](const BoundedBelowDensity&) { return unavailable("bounded-below density"); },
                        [&](const Elliptical& e) {
                          if (e.sigma == 0) return to_double(e.mu);
                          return gaussian_tag(e.generator)
                                     ? normal_quantile(to_double(e.mu), to_double(e.sigma), q)
                                     : unavailable("elliptical with opaque generator");
                        },
                        [&](const Normal& n) { return normal_quantile(to_double(n.mu), to_double(n.sigma), q); },
                        [&](const QuantileTable& t) { return table_quantile(t, q); },
                    },
                    spec.law);
}

bool has_mean(const DistributionSpec& spec) {
  return std::visit(Overloaded{
                        [](const ConcaveDensity&) { return false; },
                        [](const BoundedBelowDensity&) { return false; },
                        [](const auto&) { return true; },
                    },
                    spec.law);
}

Rational mean(const DistributionSpec& spec) {
  return std::visit(Overloaded{
                        [](const DiscreteDistribution& d) { return d.mean(); },
                        [](const Uniform& u) { return Rational((u.a + u.b) / 2); },
                        [](const MonotoneDensity& m) { return m.mean; },
                        [](const ConcaveDensity&) -> Rational {
                          throw InvalidInput("concave density: mean is not recorded");
                        },
                        [](const BoundedBelowDensity&) -> Rational {
                          throw InvalidInput("bounded-below density: mean is not recorded");
                        },
                        [](const Elliptical& e) { return e.mu; },
                        [](const Normal& n) { return n.mu; },
                        [](const QuantileTable& t) { return rational_from_double(table_mean(t)); },
                    },
                    spec.law);
}

std::vector<Rational> midpoint_levels(std::size_t count, const ProbabilityWindow& window) {
  if (count == 0) throw InvalidInput("discretization needs at least one point");
  if (!(window.lo >= 0 && window.lo < window.hi && window.hi <= 1)) {
    throw InvalidInput("probability window must satisfy 0 <= lo < hi <= 1");
  }
  std::vector<Rational> levels;
  levels.reserve(count);
  const Rational width = window.hi - window.lo;
  for (std::size_t k = 1; k <= count; ++k) {
    levels.push_back(window.lo + width * Rational(2 * static_cast<long>(k) - 1, 2 * static_cast<long>(count)));
  }
  return levels;
}

std::vector<Rational> quantile_grid(const DiscreteDistribution& d, std::size_t count, const ProbabilityWindow& window) {
  const auto levels = midpoint_levels(count, window);
  std::vector<Rational> out;
  out.reserve(count);
  // Levels are increasing, so a single pass over the cdf suffices.
  std::size_t k = 0;
  Rational cumulative = d.weights().front();
  for (const auto& q : levels) {
    while (cumulative < q && k + 1 < d.size()) {
      ++k;
      cumulative += d.weights()[k];
    }
    out.push_back(d.points()[k]);
  }
  return out;
}

std::vector<double> quantile_grid(const DistributionSpec& spec, std::size_t count, const ProbabilityWindow& window) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&spec.law)) return to_doubles(quantile_grid(*d, count, window));
  if (!has_quantile(spec)) throw InvalidInput(kind_name(spec) + ": quantile not computable from the stored parameters");
  const auto levels = midpoint_levels(count, window);
  std::vector<double> out;
  out.reserve(count);
  for (const auto& q : levels) {
    const double x = quantile(spec, to_double(q));
    if (!std::isfinite(x)) throw InvalidInput("unbounded quantile on the discretization grid");
    out.push_back(x);
  }
  return out;
}

DiscreteDistribution discretize(const DistributionSpec& spec, std::size_t count, const ProbabilityWindow& window) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&spec.law)) {
    return equal_weight(quantile_grid(*d, count, window), d->exact());
  }
  if (const auto* u = std::get_if<Uniform>(&spec.law)) {
    std::vector<Rational> points;
    for (const auto& level : midpoint_levels(count, window)) points.push_back(u->a + (u->b - u->a) * level);
    return equal_weight(points);
  }
  const auto grid = quantile_grid(spec, count, window);
  std::vector<Rational> points;
  points.reserve(grid.size());
  for (const double x : grid) points.emplace_back(x);
  return equal_weight(points, false);
}

std::string kind_name(const DistributionSpec& spec) {
  return std::visit(Overloaded{
                        [](const DiscreteDistribution&) { return std::string("discrete"); },
                        [](const Uniform&) { return std::string("uniform"); },
                        [](const MonotoneDensity&) { return std::string("monotone"); },
                        [](const ConcaveDensity&) { return std::string("concave"); },
                        [](const BoundedBelowDensity&) { return std::string("floor"); },
                        [](const Elliptical&) { return std::string("elliptical"); },
                        [](const Normal&) { return std::string("normal"); },
                        [](const QuantileTable&) { return std::string("quantile_table"); },
                    },
                    spec.law);
}

}  // namespace mix
