#pragma once

// Analytic mixability conditions, the law-determined norm screens and the
// dispatcher that turns them into a three-valued verdict.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "mix/distributions.hpp"
#include "mix/lpcert.hpp"
#include "mix/rearrange.hpp"
#include "mix/verdict.hpp"

namespace mix {

/// a + (b-a)/n <= mu <= b - (b-a)/n, exactly. Necessary for n-CM.
/// Throws InvalidInput on unbounded support (use the norm screens there).
bool mean_condition(const SupportInterval& support, const Rational& mu, std::size_t n);

/// Monotone density on [a,b]: n-CM iff the mean condition holds.
Verdict cm_monotone_density(const DistributionSpec& spec, std::size_t n);
/// Concave density: n-CM for n >= 3, Unknown below that.
Verdict cm_concave_density(const DistributionSpec& spec, std::size_t n);
/// Density bounded below by 3/(n(b-a)) on [a,b] is n-CM; Unknown otherwise.
Verdict cm_density_floor(const DistributionSpec& spec, std::size_t n);

/// Monotone densities sharing a direction (uniforms fit either):
///   sum a + max span <= sum mu <= sum b - max span.
/// Mixed directions give Unknown since the result does not apply.
Verdict jm_monotone_densities(std::span<const DistributionSpec> specs);

/// Elliptical laws with a common generator: JM iff sum sigma >= 2 max sigma.
/// Normal laws count as the "normal" generator and carry a Gaussian
/// certificate. Throws InvalidInput on mismatched generators.
Verdict jm_elliptical(std::span<const DistributionSpec> specs);

struct NormOrder {
  double p = 1;

  static NormOrder infinity() { return {std::numeric_limits<double>::infinity()}; }
};

/// ||(X - c)_+||_p and ||(X - c)_-||_p.
double positive_part_norm(const DiscreteDistribution& law, const Rational& c, NormOrder order);
double negative_part_norm(const DiscreteDistribution& law, const Rational& c, NormOrder order);

struct NormCheckOptions {
  std::vector<NormOrder> p_grid{{1}, {1.5}, {2}, {3}, NormOrder::infinity()};
  /// Extra center splits; each must sum to K.
  std::vector<std::vector<Rational>> splits;
  bool include_mean_split = true;
  /// Levels t for the identical-marginal form; the support points and the
  /// center when empty.
  std::vector<Rational> t_grid;
  /// Slack for p not in {1, infinity}, relative to max(1, rhs).
  double tolerance = kDefaultTolerance;
};

struct NormCheckReport {
  std::vector<NormViolation> violations;
  std::vector<double> p_grid;
  std::vector<double> t_grid;
  std::size_t splits_checked = 0;
  bool complete_mix_form = false;

  bool ok() const noexcept { return violations.empty(); }
};

/// Evaluates both joint inequalities for every (i, p, split) and, when all
/// marginals coincide, the complete-mix pair with s = (n mu - t)/(n - 1) for
/// every (p, t). Throws InvalidInput if a split does not sum to K.
NormCheckReport norm_check(std::span<const DiscreteDistribution> marginals, const Rational& K,
                           const NormCheckOptions& options = {});

/// Recomputes a reported violation from the inputs (the identical-marginal
/// form reads n from the number of marginals).
Validation verify_norm_violation(std::span<const DiscreteDistribution> marginals, const NormViolation& violation,
                                 double tolerance = kDefaultTolerance);

struct DecideOptions {
  /// Number of copies when a single spec is given (complete mixability).
  std::optional<std::size_t> n;
  std::uint64_t budget = kDefaultEnumerationBudget;
  std::uint64_t lp_budget = kDefaultGridBudget;
  std::uint64_t expansion_budget = 10'000;
  std::size_t restarts = 50;
  std::uint64_t seed = 7;
  double tolerance = kDefaultTolerance;
  NormCheckOptions norm;
};

/// First decisive answer wins: exact discrete path, iff conditions,
/// sufficient conditions, necessary screens. Budget overruns are noted in the
/// diagnostic and never thrown.
Verdict decide(std::span<const DistributionSpec> specs, const DecideOptions& options = {});

/// Re-validates the certificate carried by `verdict` against the marginals
/// it was issued for.
Validation verify_verdict(std::span<const DistributionSpec> specs, const Verdict& verdict,
                          const DecideOptions& options = {});

}  // namespace mix
