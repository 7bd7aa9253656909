#pragma once

// Value-at-Risk aggregation bounds under dependence uncertainty, comonotone
// sums and convex-order comparison of discrete aggregates.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mix/criteria.hpp"
#include "mix/distributions.hpp"
#include "mix/rearrange.hpp"
#include "mix/verdict.hpp"

namespace mix {

/// A bound that is exact whenever every marginal allows it.
struct BoundValue {
  double value = 0;
  std::optional<Rational> exact;
};

/// Phi(p) = 1/(1-p) * sum_i int_p^1 VaR_q(X_i) dq. Exact for discrete and
/// uniform marginals, closed form for normal ones, piecewise exact for
/// quantile tables. Throws InvalidInput when the tail integral is unavailable.
BoundValue phi_upper_bound(std::span<const DistributionSpec> specs, const Rational& p);

/// psi(p) = 1/p * sum_i int_0^p VaR_q(X_i) dq, the mirror bound for BVaR.
BoundValue psi_lower_bound(std::span<const DistributionSpec> specs, const Rational& p);

/// Law of F^{-1}(W) with W uniform on the window, when expressible as a spec.
/// Empty for laws with unbounded tails (normal with sigma > 0).
std::optional<DistributionSpec> tail_conditional(const DistributionSpec& spec, const ProbabilityWindow& window);

enum class BoundSide { Worst, Best, Both };

struct RiskBoundOptions {
  std::size_t grid = 1000;
  std::size_t restarts = 20;
  std::uint64_t seed = 7;
  LocalSearchOptions search;
  DecideOptions decide;
};

struct SideReport {
  /// Arrangement estimate: max-min row sum (worst) or min-max row sum (best).
  double estimate = 0;
  /// Phi(p) for the worst side, psi(p) for the best side.
  BoundValue bound;
  /// Half the sum of the quantile-grid meshes.
  double epsilon = 0;
  /// Set only when the tail-conditional marginals are certified JM.
  bool sharp = false;
  Verdict tail_verdict;
  SearchDiagnostics diagnostics;
};

struct RiskBoundReport {
  Rational p;
  std::size_t grid = 0;
  std::optional<SideReport> worst;
  std::optional<SideReport> best;
};

/// Worst-case VaR estimate on the upper window (p, 1].
RiskBoundReport wvar_estimate(std::span<const DistributionSpec> specs, const Rational& p,
                              const RiskBoundOptions& options = {});
/// Best-case VaR estimate on the lower window (0, p].
RiskBoundReport bvar_estimate(std::span<const DistributionSpec> specs, const Rational& p,
                              const RiskBoundOptions& options = {});
RiskBoundReport var_bounds(std::span<const DistributionSpec> specs, const Rational& p, BoundSide side,
                           const RiskBoundOptions& options = {});

/// Law of F_1^{-1}(U) + ... + F_n^{-1}(U) on the N-point midpoint grid.
/// Exact when every marginal is exact discrete.
DiscreteDistribution comonotone_sum(std::span<const DistributionSpec> specs, std::size_t count);

/// (t, E[(S - t)_+]) at every support point of S.
struct StopLossCurve {
  std::vector<Rational> t;
  std::vector<Rational> value;
};

StopLossCurve stop_loss_curve(const DiscreteDistribution& law);
Rational stop_loss(const DiscreteDistribution& law, const Rational& t);

/// S1 <=cx S2: equal means, then E[(S1 - t)_+] <= E[(S2 - t)_+] at every
/// merged support point. Exact for exact laws; otherwise within `tolerance`.
bool convex_order_leq(const DiscreteDistribution& s1, const DiscreteDistribution& s2,
                      double tolerance = kDefaultTolerance);

}  // namespace mix
