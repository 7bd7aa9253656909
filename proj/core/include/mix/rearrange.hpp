#pragma once

// Min-max arrangement of matrix columns: pick one permutation per column so
// that the row sums are as flat as possible.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mix/distributions.hpp"
#include "mix/rational.hpp"
#include "mix/verdict.hpp"

namespace mix {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;
inline constexpr double kDefaultTolerance = 1e-9;

/// m x n values stored column by column.
template <class T>
class MatrixInstance {
 public:
  MatrixInstance() = default;
  /// Throws InvalidInput on ragged or empty columns.
  explicit MatrixInstance(std::vector<std::vector<T>> columns);
  static MatrixInstance from_rows(const std::vector<std::vector<T>>& rows);

  std::size_t rows() const noexcept { return columns_.empty() ? 0 : columns_.front().size(); }
  std::size_t cols() const noexcept { return columns_.size(); }
  const T& operator()(std::size_t i, std::size_t j) const { return columns_[j][i]; }
  const std::vector<T>& column(std::size_t j) const { return columns_[j]; }
  const std::vector<std::vector<T>>& columns() const noexcept { return columns_; }

  T total() const;

 private:
  std::vector<std::vector<T>> columns_;
};

enum class Objective { Minimax, Range, Variance };

std::string to_string(Objective objective);
Objective parse_objective(const std::string& name);

struct SearchDiagnostics {
  std::string method;
  std::uint64_t leaves = 0;
  std::size_t restarts = 0;
  std::size_t best_restart = 0;
  std::size_t sweeps = 0;
  std::size_t swaps = 0;
  /// Objective after each sweep of the best restart.
  std::vector<double> trace;
  bool converged = true;
};

template <class T>
struct SolveResult {
  Objective objective = Objective::Minimax;
  T value{};
  Arrangement arrangement;
  std::vector<T> row_sums;
  /// (1/m) * total for minimax; 0 for range and variance.
  T lower_bound{};
  bool exact_mix = false;
  SearchDiagnostics diagnostics;
};

struct LocalSearchOptions {
  std::size_t max_sweeps = 10'000;
  /// Pairwise swap refinement once sweeps stall.
  bool swap_refinement = true;
  std::size_t threads = 0;
  double tolerance = kDefaultTolerance;
};

/// (m!)^(n-1), or nullopt when it exceeds 2^64 - 1.
std::optional<std::uint64_t> enumeration_size(std::size_t m, std::size_t n);

bool is_valid(const Arrangement& arrangement, std::size_t m, std::size_t n);
Arrangement identity_arrangement(std::size_t m, std::size_t n);
/// sigma_j -> sigma_j o sigma_1^{-1}; row sums are permuted, never changed.
Arrangement canonicalize(const Arrangement& arrangement);

/// Row sums, objective and exact-mix flag of a given arrangement.
template <class T>
SolveResult<T> evaluate(const MatrixInstance<T>& instance, const Arrangement& arrangement,
                        Objective objective = Objective::Minimax, double tolerance = kDefaultTolerance);

/// Exhaustive search over canonical arrangements. Ties go to the
/// lexicographically smallest arrangement. Throws BudgetExceeded when
/// (m!)^(n-1) exceeds `budget`.
template <class T>
SolveResult<T> brute_force(const MatrixInstance<T>& instance, Objective objective = Objective::Minimax,
                           std::uint64_t budget = kDefaultEnumerationBudget, double tolerance = kDefaultTolerance);

/// Counter-monotone column sweeps from `restarts` starting points. Restart 0
/// keeps the input order; the others shuffle every column but the first with
/// a stream derived from (seed, restart).
template <class T>
SolveResult<T> local_search(const MatrixInstance<T>& instance, Objective objective, std::size_t restarts,
                            std::uint64_t seed, const LocalSearchOptions& options = {});

extern template class MatrixInstance<double>;
extern template class MatrixInstance<Rational>;
extern template SolveResult<double> evaluate(const MatrixInstance<double>&, const Arrangement&, Objective, double);
extern template SolveResult<Rational> evaluate(const MatrixInstance<Rational>&, const Arrangement&, Objective, double);
extern template SolveResult<double> brute_force(const MatrixInstance<double>&, Objective, std::uint64_t, double);
extern template SolveResult<Rational> brute_force(const MatrixInstance<Rational>&, Objective, std::uint64_t, double);
extern template SolveResult<double> local_search(const MatrixInstance<double>&, Objective, std::size_t, std::uint64_t,
                                                 const LocalSearchOptions&);
extern template SolveResult<Rational> local_search(const MatrixInstance<Rational>&, Objective, std::size_t,
                                                   std::uint64_t, const LocalSearchOptions&);

struct MatrixMixOptions {
  std::uint64_t budget = kDefaultEnumerationBudget;
  /// Largest common denominator accepted when expanding unequal weights.
  std::uint64_t expansion_budget = 10'000;
  std::size_t restarts = 50;
  std::uint64_t seed = 7;
  double tolerance = kDefaultTolerance;
};

/// Column j lists the atoms of F_j, each repeated to the common denominator
/// of all weights. Throws BudgetExceeded if that denominator is too large.
MatrixInstance<Rational> expand_to_matrix(std::span<const DiscreteDistribution> marginals,
                                          std::uint64_t expansion_budget);

/// Joint mixability of discrete marginals through the arrangement problem:
/// Mixable with an ArrangementCertificate when an exact mix is found,
/// NotMixable when exhaustive search proves none exists, Unknown otherwise.
/// For n >= 3 "none exists" covers joint laws with masses on the 1/m lattice
/// only; decide() does not rely on that NotMixable and uses the LP instead.
Verdict jm_from_matrix(std::span<const DiscreteDistribution> marginals, const MatrixMixOptions& options = {});

}  // namespace mix
