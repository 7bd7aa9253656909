#include "mix/rearrange.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>
#include <type_traits>

#include "mix/error.hpp"

namespace mix {
namespace {

template <class T>
constexpr bool kExactType = std::is_same_v<T, Rational>;

template <class T>
double as_double(const T& v) {
  if constexpr (kExactType<T>) {
    return to_double(v);
  } else {
    return static_cast<double>(v);
  }
}

template <class T>
T mean_of(const std::vector<T>& values) {
  T total = 0;
  for (const auto& v : values) total += v;
  return T(total / static_cast<long>(values.size()));
}

template <class T>
T objective_value(const std::vector<T>& sums, Objective objective) {
  const auto [lo, hi] = std::minmax_element(sums.begin(), sums.end());
  switch (objective) {
    case Objective::Minimax:
      return *hi;
    case Objective::Range:
      return T(*hi - *lo);
    case Objective::Variance: {
      const T avg = mean_of(sums);
      T acc = 0;
      for (const auto& s : sums) acc += (s - avg) * (s - avg);
      return T(acc / static_cast<long>(sums.size()));
    }
  }
  return *hi;
}

template <class T>
T sum_of_squares(const std::vector<T>& sums) {
  T acc = 0;
  for (const auto& s : sums) acc += s * s;
  return acc;
}

template <class T>
bool all_equal(const std::vector<T>& sums, double tolerance) {
  const auto [lo, hi] = std::minmax_element(sums.begin(), sums.end());
  if constexpr (kExactType<T>) {
    (void)tolerance;
    return *lo == *hi;
  } else {
    const double scale = std::max({1.0, std::abs(*lo), std::abs(*hi)});
    return *hi - *lo <= tolerance * scale;
  }
}

template <class T>
T lower_bound_for(const MatrixInstance<T>& instance, Objective objective) {
  if (objective != Objective::Minimax) return T(0);
  return T(instance.total() / static_cast<long>(instance.rows()));
}

// Strict improvement of (objective, sum of squares) in lexicographic order.
template <class T>
bool improves(const T& obj, const T& sq, const T& best_obj, const T& best_sq, double tolerance) {
  if constexpr (kExactType<T>) {
    (void)tolerance;
    return obj < best_obj || (obj == best_obj && sq < best_sq);
  } else {
    const double obj_eps = tolerance * 1e-3 * std::max(1.0, std::abs(best_obj));
    const double sq_eps = tolerance * 1e-3 * std::max(1.0, std::abs(best_sq));
    if (obj < best_obj - obj_eps) return true;
    return obj <= best_obj + obj_eps && sq < best_sq - sq_eps;
  }
}

template <class T>
std::vector<T> row_sums(const MatrixInstance<T>& instance, const Arrangement& arrangement) {
  std::vector<T> sums(instance.rows(), T(0));
  for (std::size_t j = 0; j < instance.cols(); ++j) {
    const auto& perm = arrangement.perms[j];
    for (std::size_t i = 0; i < instance.rows(); ++i) sums[i] += instance(perm[i], j);
  }
  return sums;
}

template <class T>
struct RestartOutcome {
  T value{};
  Arrangement arrangement;
  std::size_t sweeps = 0;
  std::size_t swaps = 0;
  std::vector<double> trace;
  bool converged = true;
};

// One restart of the sweep-and-swap search.
template <class T>
class SweepSearch {
 public:
  SweepSearch(const MatrixInstance<T>& instance, Objective objective, const LocalSearchOptions& options,
              std::uint64_t stream)
      : a_(instance),
        objective_(objective),
        options_(options),
        m_(instance.rows()),
        n_(instance.cols()),
        rng_(stream) {}

  RestartOutcome<T> run(Arrangement start) {
    perms_ = std::move(start.perms);
    sums_ = row_sums(a_, Arrangement{perms_});
    RestartOutcome<T> out;
    T obj = objective_value(sums_, objective_);
    T sq = sum_of_squares(sums_);
    out.trace.push_back(as_double(obj));
    out.converged = false;
    // Sweeps that only reshuffle tied rows; they can leave a plateau that
    // neither sweeps nor pair swaps improve on.
    const std::size_t plateau_limit = 2 * n_;
    std::size_t plateau = 0;
    while (out.sweeps < options_.max_sweeps) {
      sweep(plateau > 0);
      ++out.sweeps;
      const T next_obj = objective_value(sums_, objective_);
      const T next_sq = sum_of_squares(sums_);
      out.trace.push_back(as_double(next_obj));
      if (improves(next_obj, next_sq, obj, sq, options_.tolerance)) {
        obj = next_obj;
        sq = next_sq;
        plateau = 0;
        continue;
      }
      if (options_.swap_refinement && pair_swap()) {
        ++out.swaps;
        obj = objective_value(sums_, objective_);
        sq = sum_of_squares(sums_);
        plateau = 0;
        continue;
      }
      if (has_ties_ && plateau < plateau_limit) {
        ++plateau;
        continue;
      }
      out.converged = true;
      break;
    }
    out.value = objective_value(sums_, objective_);
    out.arrangement = Arrangement{perms_};
    return out;
  }

 private:
  // Re-sort every column against the partial sums of the others:
  // largest entry to the smallest partial sum. Ties go by row index, or in
  // random order when `shuffle_ties` is set.
  void sweep(bool shuffle_ties) {
    std::vector<T> partial(m_);
    std::vector<std::size_t> rows(m_);
    std::vector<std::size_t> entries(m_);
    has_ties_ = false;
    for (std::size_t j = 0; j < n_; ++j) {
      auto& perm = perms_[j];
      for (std::size_t i = 0; i < m_; ++i) partial[i] = sums_[i] - a_(perm[i], j);
      std::iota(rows.begin(), rows.end(), std::size_t{0});
      if (shuffle_ties) std::shuffle(rows.begin(), rows.end(), rng_);
      std::stable_sort(rows.begin(), rows.end(), [&](std::size_t l, std::size_t r) { return partial[l] < partial[r]; });
      for (std::size_t k = 1; k < m_ && !has_ties_; ++k) has_ties_ = partial[rows[k]] == partial[rows[k - 1]];
      std::iota(entries.begin(), entries.end(), std::size_t{0});
      std::stable_sort(entries.begin(), entries.end(),
                       [&](std::size_t l, std::size_t r) { return a_(l, j) > a_(r, j); });
      for (std::size_t k = 0; k < m_; ++k) perm[rows[k]] = entries[k];
      for (std::size_t i = 0; i < m_; ++i) sums_[i] = partial[i] + a_(perm[i], j);
    }
  }

  // Exchange the entries of two rows in two columns at once when that moves
  // the pair of row sums strictly closer together. Single-column exchanges
  // cannot help once a sweep has converged.
  bool pair_swap() {
    if (n_ < 3 || m_ < 2) return false;
    std::vector<std::size_t> order(m_);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return sums_[l] > sums_[r]; });
    // Rows with the largest sums against rows with the smallest sums.
    const std::size_t reach = std::min<std::size_t>(m_, 8);
    for (std::size_t hi_rank = 0; hi_rank < reach; ++hi_rank) {
      for (std::size_t lo_rank = m_; lo_rank-- > m_ - reach;) {
        const std::size_t hi = order[hi_rank];
        const std::size_t lo = order[lo_rank];
        if (hi == lo || !(sums_[hi] > sums_[lo])) continue;
        const T gap = sums_[hi] - sums_[lo];
        for (std::size_t j = 0; j < n_; ++j) {
          const T dj = a_(perms_[j][hi], j) - a_(perms_[j][lo], j);
          for (std::size_t k = j + 1; k < n_; ++k) {
            const T d = dj + (a_(perms_[k][hi], k) - a_(perms_[k][lo], k));
            if (d > 0 && d < gap && moves_closer(d, gap)) {
              std::swap(perms_[j][hi], perms_[j][lo]);
              std::swap(perms_[k][hi], perms_[k][lo]);
              sums_[hi] -= d;
              sums_[lo] += d;
              return true;
            }
          }
        }
      }
    }
    return false;
  }

  bool moves_closer(const T& d, const T& gap) const {
    if constexpr (kExactType<T>) {
      (void)d;
      (void)gap;
      return true;
    } else {
      const double eps = options_.tolerance * 1e-3 * std::max(1.0, std::abs(gap));
      return d > eps && d < gap - eps;
    }
  }

  const MatrixInstance<T>& a_;
  Objective objective_;
  LocalSearchOptions options_;
  std::size_t m_;
  std::size_t n_;
  std::vector<std::vector<std::size_t>> perms_;
  std::vector<T> sums_;
  std::mt19937_64 rng_;
  bool has_ties_ = false;
};

Arrangement random_start(std::size_t m, std::size_t n, std::uint64_t seed, std::size_t restart) {
  Arrangement start = identity_arrangement(m, n);
  if (restart == 0) return start;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart), static_cast<std::uint32_t>(restart >> 32)};
  std::mt19937_64 rng(seq);
  for (std::size_t j = 1; j < n; ++j) std::shuffle(start.perms[j].begin(), start.perms[j].end(), rng);
  return start;
}

template <class T>
bool better_outcome(const RestartOutcome<T>& l, const Arrangement& l_canon, const RestartOutcome<T>& r,
                    const Arrangement& r_canon) {
  if (l.value < r.value) return true;
  if (r.value < l.value) return false;
  return l_canon < r_canon;
}

}  // namespace

template <class T>
MatrixInstance<T>::MatrixInstance(std::vector<std::vector<T>> columns) : columns_(std::move(columns)) {
  if (columns_.empty() || columns_.front().empty()) throw InvalidInput("matrix instance needs m >= 1 and n >= 1");
  for (const auto& c : columns_) {
    if (c.size() != columns_.front().size()) throw InvalidInput("matrix instance: columns differ in length");
    if constexpr (!kExactType<T>) {
      for (const auto& v : c) {
        if (!std::isfinite(v)) throw InvalidInput("matrix instance: entries must be finite");
      }
    }
  }
}

template <class T>
MatrixInstance<T> MatrixInstance<T>::from_rows(const std::vector<std::vector<T>>& rows) {
  if (rows.empty() || rows.front().empty()) throw InvalidInput("matrix instance needs m >= 1 and n >= 1");
  std::vector<std::vector<T>> columns(rows.front().size(), std::vector<T>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != columns.size()) throw InvalidInput("matrix instance: rows differ in length");
    for (std::size_t j = 0; j < columns.size(); ++j) columns[j][i] = rows[i][j];
  }
  return MatrixInstance(std::move(columns));
}

template <class T>
T MatrixInstance<T>::total() const {
  T acc = 0;
  for (const auto& c : columns_) {
    for (const auto& v : c) acc += v;
  }
  return acc;
}

std::string to_string(Objective objective) {
  switch (objective) {
    case Objective::Minimax:
      return "minimax";
    case Objective::Range:
      return "range";
    case Objective::Variance:
      return "variance";
  }
  return "minimax";
}

Objective parse_objective(const std::string& name) {
  if (name == "minimax") return Objective::Minimax;
  if (name == "range") return Objective::Range;
  if (name == "variance") return Objective::Variance;
  throw InvalidInput("unknown objective '" + name + "' (expected minimax, range or variance)");
}

std::optional<std::uint64_t> enumeration_size(std::size_t m, std::size_t n) {
  if (n <= 1 || m <= 1) return 1;
  std::uint64_t factorial = 1;
  for (std::size_t k = 2; k <= m; ++k) {
    if (factorial > std::numeric_limits<std::uint64_t>::max() / k) return std::nullopt;
    factorial *= k;
  }
  std::uint64_t total = 1;
  for (std::size_t j = 1; j < n; ++j) {
    if (total > std::numeric_limits<std::uint64_t>::max() / factorial) return std::nullopt;
    total *= factorial;
  }
  return total;
}

bool is_valid(const Arrangement& arrangement, std::size_t m, std::size_t n) {
  if (arrangement.perms.size() != n) return false;
  for (const auto& perm : arrangement.perms) {
    if (perm.size() != m) return false;
    std::vector<bool> seen(m, false);
    for (const std::size_t r : perm) {
      if (r >= m || seen[r]) return false;
      seen[r] = true;
    }
  }
  return true;
}

Arrangement identity_arrangement(std::size_t m, std::size_t n) {
  Arrangement out;
  out.perms.assign(n, std::vector<std::size_t>(m));
  for (auto& perm : out.perms) std::iota(perm.begin(), perm.end(), std::size_t{0});
  return out;
}

Arrangement canonicalize(const Arrangement& arrangement) {
  if (arrangement.perms.empty()) return arrangement;
  const auto& first = arrangement.perms.front();
  const std::size_t m = first.size();
  std::vector<std::size_t> inverse(m);
  for (std::size_t i = 0; i < m; ++i) inverse[first[i]] = i;
  Arrangement out;
  out.perms.reserve(arrangement.perms.size());
  for (const auto& perm : arrangement.perms) {
    std::vector<std::size_t> next(m);
    for (std::size_t i = 0; i < m; ++i) next[i] = perm[inverse[i]];
    out.perms.push_back(std::move(next));
  }
  return out;
}

template <class T>
SolveResult<T> evaluate(const MatrixInstance<T>& instance, const Arrangement& arrangement, Objective objective,
                        double tolerance) {
  if (!is_valid(arrangement, instance.rows(), instance.cols())) {
    throw InvalidInput("arrangement does not match the matrix dimensions");
  }
  SolveResult<T> out;
  out.objective = objective;
  out.arrangement = arrangement;
  out.row_sums = row_sums(instance, arrangement);
  out.value = objective_value(out.row_sums, objective);
  out.lower_bound = lower_bound_for(instance, objective);
  out.exact_mix = all_equal(out.row_sums, tolerance);
  out.diagnostics.method = "evaluate";
  return out;
}

template <class T>
SolveResult<T> brute_force(const MatrixInstance<T>& instance, Objective objective, std::uint64_t budget,
                           double tolerance) {
  const std::size_t m = instance.rows();
  const std::size_t n = instance.cols();
  const auto leaves = enumeration_size(m, n);
  if (!leaves || *leaves > budget) {
    std::ostringstream msg;
    msg << "exhaustive search over (" << m << "!)^" << (n - 1) << " arrangements exceeds the budget of " << budget;
    throw BudgetExceeded(msg.str());
  }

  Arrangement current = identity_arrangement(m, n);
  std::vector<std::vector<T>> partial(n, std::vector<T>(m));
  for (std::size_t i = 0; i < m; ++i) partial[0][i] = instance(i, 0);

  // Smallest remaining column entries, for minimax pruning.
  std::vector<T> tail_min(n + 1, T(0));
  for (std::size_t j = n; j-- > 1;) {
    tail_min[j] = tail_min[j + 1] + *std::min_element(instance.column(j).begin(), instance.column(j).end());
  }

  std::optional<T> best;
  Arrangement best_arrangement = current;
  std::uint64_t visited = 0;
  bool done = false;

  auto visit_leaf = [&](const std::vector<T>& sums) {
    ++visited;
    const T value = objective_value(sums, objective);
    if (!best || value < *best) {
      best = value;
      best_arrangement = current;
      if (all_equal(sums, tolerance)) done = true;
    }
  };

  auto descend = [&](auto& self, std::size_t j) -> void {
    if (j == n) {
      visit_leaf(partial[n - 1]);
      return;
    }
    auto& perm = current.perms[j];
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
      for (std::size_t i = 0; i < m; ++i) partial[j][i] = partial[j - 1][i] + instance(perm[i], j);
      if (objective == Objective::Minimax && best) {
        const T bound = *std::max_element(partial[j].begin(), partial[j].end()) + tail_min[j + 1];
        if (!(bound < *best)) continue;
      }
      self(self, j + 1);
      if (done) return;
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::iota(perm.begin(), perm.end(), std::size_t{0});
  };

  if (n == 1) {
    visit_leaf(partial[0]);
  } else {
    descend(descend, 1);
  }

  SolveResult<T> out = evaluate(instance, best_arrangement, objective, tolerance);
  out.diagnostics.method = "brute_force";
  out.diagnostics.leaves = visited;
  return out;
}

template <class T>
SolveResult<T> local_search(const MatrixInstance<T>& instance, Objective objective, std::size_t restarts,
                            std::uint64_t seed, const LocalSearchOptions& options) {
  const std::size_t m = instance.rows();
  const std::size_t n = instance.cols();
  if (m == 1 || n == 1) {
    SolveResult<T> out = evaluate(instance, identity_arrangement(m, n), objective, options.tolerance);
    out.diagnostics.method = "trivial";
    return out;
  }
  restarts = std::max<std::size_t>(restarts, 1);

  std::vector<RestartOutcome<T>> outcomes(restarts);
  std::vector<Arrangement> canon(restarts);
  auto work = [&](std::size_t r) {
    SweepSearch<T> search(instance, objective, options, seed ^ (0x9e3779b97f4a7c15ULL * (r + 1)));
    outcomes[r] = search.run(random_start(m, n, seed, r));
    canon[r] = canonicalize(outcomes[r].arrangement);
  };

  std::size_t threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, restarts);
  if (threads <= 1) {
    for (std::size_t r = 0; r < restarts; ++r) work(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < restarts; r = next++) work(r);
      });
    }
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < restarts; ++r) {
    if (better_outcome(outcomes[r], canon[r], outcomes[best], canon[best])) best = r;
  }

  SolveResult<T> out = evaluate(instance, canon[best], objective, options.tolerance);
  out.diagnostics.method = "local_search";
  out.diagnostics.restarts = restarts;
  out.diagnostics.best_restart = best;
  out.diagnostics.sweeps = outcomes[best].sweeps;
  out.diagnostics.swaps = outcomes[best].swaps;
  out.diagnostics.trace = std::move(outcomes[best].trace);
  out.diagnostics.converged = outcomes[best].converged;
  return out;
}

template class MatrixInstance<double>;
template class MatrixInstance<Rational>;
template SolveResult<double> evaluate(const MatrixInstance<double>&, const Arrangement&, Objective, double);
template SolveResult<Rational> evaluate(const MatrixInstance<Rational>&, const Arrangement&, Objective, double);
template SolveResult<double> brute_force(const MatrixInstance<double>&, Objective, std::uint64_t, double);
template SolveResult<Rational> brute_force(const MatrixInstance<Rational>&, Objective, std::uint64_t, double);
template SolveResult<double> local_search(const MatrixInstance<double>&, Objective, std::size_t, std::uint64_t,
                                          const LocalSearchOptions&);
template SolveResult<Rational> local_search(const MatrixInstance<Rational>&, Objective, std::size_t, std::uint64_t,
                                            const LocalSearchOptions&);

MatrixInstance<Rational> expand_to_matrix(std::span<const DiscreteDistribution> marginals,
                                          std::uint64_t expansion_budget) {
  if (marginals.empty()) throw InvalidInput("at least one marginal is required");
  std::vector<Rational> all_weights;
  for (const auto& d : marginals) all_weights.insert(all_weights.end(), d.weights().begin(), d.weights().end());
  const BigInt rows = common_denominator(all_weights);
  if (rows > expansion_budget) {
    throw BudgetExceeded("expanding weights to the common denominator " + rows.str() +
                         " exceeds the expansion budget of " + std::to_string(expansion_budget));
  }
  std::vector<std::vector<Rational>> columns;
  columns.reserve(marginals.size());
  for (const auto& d : marginals) {
    std::vector<Rational> column;
    column.reserve(rows.convert_to<std::size_t>());
    for (std::size_t k = 0; k < d.size(); ++k) {
      const Rational copies = d.weights()[k] * rows;
      const auto count = numerator(copies).convert_to<std::size_t>();
      column.insert(column.end(), count, d.points()[k]);
    }
    columns.push_back(std::move(column));
  }
  return MatrixInstance<Rational>(std::move(columns));
}

namespace {

template <class T>
Verdict matrix_verdict(const MatrixInstance<T>& matrix, const MatrixMixOptions& options) {
  const auto size = enumeration_size(matrix.rows(), matrix.cols());
  const bool exhaustive = size && *size <= options.budget;
  SolveResult<T> result;
  if (exhaustive) {
    result = brute_force(matrix, Objective::Minimax, options.budget, options.tolerance);
  } else {
    LocalSearchOptions ls;
    ls.tolerance = options.tolerance;
    result = local_search(matrix, Objective::Minimax, options.restarts, options.seed, ls);
  }
  std::ostringstream diag;
  diag << result.diagnostics.method << ": T = " << as_double(result.value)
       << ", lower bound = " << as_double(result.lower_bound);
  if (result.exact_mix) {
    ArrangementCertificate cert;
    for (const auto& c : matrix.columns()) {
      std::vector<Rational> column;
      column.reserve(c.size());
      for (const auto& v : c) column.emplace_back(v);
      cert.columns.push_back(std::move(column));
    }
    cert.arrangement = result.arrangement;
    if constexpr (kExactType<T>) {
      cert.center = result.row_sums.front();
    } else {
      cert.center = Rational(result.lower_bound);
    }
    return Verdict::mixable(exhaustive ? "exhaustive-arrangement" : "arrangement-search", std::move(cert), diag.str());
  }
  if (exhaustive) return Verdict::not_mixable("exhaustive-arrangement", {}, diag.str());
  return Verdict::unknown("arrangement-search", diag.str() + " (heuristic only, no exact mix found)");
}

}  // namespace

Verdict jm_from_matrix(std::span<const DiscreteDistribution> marginals, const MatrixMixOptions& options) {
  const MatrixInstance<Rational> matrix = expand_to_matrix(marginals, options.expansion_budget);
  const bool exact = std::all_of(marginals.begin(), marginals.end(), [](const auto& d) { return d.exact(); });
  if (exact) return matrix_verdict(matrix, options);
  std::vector<std::vector<double>> columns;
  for (const auto& c : matrix.columns()) columns.push_back(to_doubles(c));
  return matrix_verdict(MatrixInstance<double>(std::move(columns)), options);
}

}  // namespace mix
