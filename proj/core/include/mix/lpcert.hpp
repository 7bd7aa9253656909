#pragma once

// Exact joint-mixability decision for finite discrete marginals as a
// transport-polytope feasibility problem, with primal and dual certificates.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mix/distributions.hpp"
#include "mix/verdict.hpp"

namespace mix {

inline constexpr std::uint64_t kDefaultGridBudget = 1'000'000;

/// All (x_1..x_n) in supp(F_1) x ... x supp(F_n) with x_1 + ... + x_n = center,
/// in lexicographic order. Throws BudgetExceeded past `budget` points.
std::vector<std::vector<Rational>> hyperplane_grid(std::span<const DiscreteDistribution> marginals,
                                                   const Rational& center,
                                                   std::uint64_t budget = kDefaultGridBudget);

/// Phase-1 simplex in exact rational arithmetic. Feasible gives Mixable with a
/// JointPmf; infeasible gives NotMixable with a DualCertificate normalized so
/// that sum_i E f_i(X_i) = 0 and sum_i f_i(x_i) >= 1 on the grid.
/// `center` defaults to the sum of the means. Throws InvalidInput for
/// float-mode marginals and BudgetExceeded for oversized grids.
Verdict jm_lp_decide(std::span<const DiscreteDistribution> marginals, std::optional<Rational> center = std::nullopt,
                     std::uint64_t budget = kDefaultGridBudget);

Validation verify_primal(std::span<const DiscreteDistribution> marginals, const JointPmf& pmf);

/// Checks the pointwise bound by enumerating the hyperplane grid and the
/// integral condition exactly.
Validation verify_dual(std::span<const DiscreteDistribution> marginals, const DualCertificate& cert,
                       const Rational& center, std::uint64_t budget = kDefaultGridBudget);

}  // namespace mix
