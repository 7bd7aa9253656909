#pragma once

// Marginal laws: exact discrete tables and parameter-level continuous specs.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mix/rational.hpp"

namespace mix {

/// Finite law on strictly increasing points with positive weights summing to 1.
///
/// Values are always held as rationals. `exact()` is false for float-mode
/// data, where the stored rationals are the binary values of doubles and
/// equality tests should use a tolerance.
class DiscreteDistribution {
 public:
  const std::vector<Rational>& points() const noexcept { return points_; }
  const std::vector<Rational>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool exact() const noexcept { return exact_; }

  const Rational& min() const { return points_.front(); }
  const Rational& max() const { return points_.back(); }
  Rational mean() const;
  bool is_point_mass() const noexcept { return points_.size() == 1; }

  /// Same law, tagged as float mode.
  DiscreteDistribution as_float() const;

  friend bool operator==(const DiscreteDistribution&, const DiscreteDistribution&) = default;

 private:
  friend DiscreteDistribution make_discrete(std::span<const Rational>, std::span<const Rational>, bool);
  DiscreteDistribution() = default;

  std::vector<Rational> points_;
  std::vector<Rational> weights_;
  bool exact_ = true;
};

/// Sorts points, merges duplicates (adding weights) and renormalizes.
/// Throws InvalidInput on empty input, length mismatch or non-positive weight.
DiscreteDistribution make_discrete(std::span<const Rational> points, std::span<const Rational> weights,
                                   bool exact = true);
/// Float-mode overload; rejects NaN and infinite points.
DiscreteDistribution make_discrete(std::span<const double> points, std::span<const double> weights);

DiscreteDistribution point_mass(const Rational& at);
/// Equal weight 1/m on each of the m atoms (repeats allowed and merged).
DiscreteDistribution equal_weight(std::span<const Rational> atoms, bool exact = true);

enum class Direction { Increasing, Decreasing };

struct Uniform {
  Rational a, b;

  friend bool operator==(const Uniform&, const Uniform&) = default;
};

/// Piecewise-linear quantile function through (q, x) knots.
struct QuantileTable {
  std::vector<double> q;
  std::vector<double> x;

  friend bool operator==(const QuantileTable&, const QuantileTable&) = default;
};

/// Parameter-level description; the quantile is only available through `table`.
struct MonotoneDensity {
  Rational a, b, mean;
  Direction direction = Direction::Decreasing;
  std::optional<QuantileTable> table;

  friend bool operator==(const MonotoneDensity&, const MonotoneDensity&) = default;
};

struct ConcaveDensity {
  Rational a, b;

  friend bool operator==(const ConcaveDensity&, const ConcaveDensity&) = default;
};

struct BoundedBelowDensity {
  Rational a, b, density_floor;

  friend bool operator==(const BoundedBelowDensity&, const BoundedBelowDensity&) = default;
};

/// One-dimensional elliptical law; `generator` is an opaque family tag.
struct Elliptical {
  Rational mu, sigma;
  std::string generator;

  friend bool operator==(const Elliptical&, const Elliptical&) = default;
};

struct Normal {
  Rational mu, sigma;

  friend bool operator==(const Normal&, const Normal&) = default;
};

using Law = std::variant<DiscreteDistribution, Uniform, MonotoneDensity, ConcaveDensity, BoundedBelowDensity,
                         Elliptical, Normal, QuantileTable>;

struct DistributionSpec {
  Law law;
  /// User assertion that the law has a symmetric unimodal density.
  bool symmetric_unimodal = false;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

// Validated constructors. All throw InvalidInput on broken invariants.
DistributionSpec discrete(DiscreteDistribution d);
DistributionSpec uniform(Rational a, Rational b);
DistributionSpec monotone_density(Rational a, Rational b, Rational mean, Direction direction,
                                  std::optional<QuantileTable> table = std::nullopt);
DistributionSpec concave_density(Rational a, Rational b);
DistributionSpec bounded_below_density(Rational a, Rational b, Rational density_floor);
DistributionSpec elliptical(Rational mu, Rational sigma, std::string generator);
DistributionSpec normal(Rational mu, Rational sigma);
DistributionSpec quantile_table(std::vector<double> q, std::vector<double> x);

void validate(const DistributionSpec& spec);

/// True if the spec can be handled with exact rational arithmetic end to end.
bool is_rational(const DistributionSpec& spec);

/// Essential infimum/supremum; an absent end means unbounded on that side.
struct SupportInterval {
  std::optional<Rational> lower;
  std::optional<Rational> upper;

  bool bounded() const noexcept { return lower.has_value() && upper.has_value(); }
  double a() const;
  double b() const;
};

SupportInterval essential_support(const DistributionSpec& spec);

/// Left-continuous inverse cdf, inf{x : F(x) >= q}, for q in (0, 1].
/// Returns +infinity at q = 1 for laws unbounded above.
double quantile(const DistributionSpec& spec, double q);
/// Exact quantile of a discrete law.
Rational quantile(const DiscreteDistribution& d, const Rational& q);

bool has_quantile(const DistributionSpec& spec);

/// Finite mean. Throws InvalidInput when the spec does not carry one.
Rational mean(const DistributionSpec& spec);
bool has_mean(const DistributionSpec& spec);

/// Probability window (lo, hi] used for midpoint quantile grids.
struct ProbabilityWindow {
  Rational lo = 0;
  Rational hi = 1;

  static ProbabilityWindow whole() { return {0, 1}; }
  static ProbabilityWindow upper_tail(const Rational& p) { return {p, 1}; }
  static ProbabilityWindow lower_tail(const Rational& p) { return {0, p}; }
};

/// q_k = lo + (hi - lo)(k - 1/2)/N, k = 1..N.
std::vector<Rational> midpoint_levels(std::size_t count, const ProbabilityWindow& window);

/// Unmerged midpoint quantile values, one per level.
std::vector<double> quantile_grid(const DistributionSpec& spec, std::size_t count, const ProbabilityWindow& window);
/// Exact variant for discrete laws.
std::vector<Rational> quantile_grid(const DiscreteDistribution& d, std::size_t count, const ProbabilityWindow& window);

/// N equally weighted midpoint quantiles, merged. Exact for exact discrete input.
DiscreteDistribution discretize(const DistributionSpec& spec, std::size_t count,
                                const ProbabilityWindow& window = ProbabilityWindow::whole());

std::string kind_name(const DistributionSpec& spec);

}  // namespace mix
