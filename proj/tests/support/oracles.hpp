#pragma once

// Reference computations used by the tests. Nothing here calls into the
// library's solvers: each oracle is the naive definition.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "mix/distributions.hpp"
#include "mix/rational.hpp"

namespace mix::oracle {

inline Rational q(const char* text) { return parse_rational(text); }
inline Rational q(long num, long den = 1) { return Rational(num, den); }

/// Smallest max row sum over all ways to permute columns 1..n-1 against
/// column 0.
inline Rational min_max_row_sum(const std::vector<std::vector<Rational>>& cols) {
  const std::size_t m = cols.front().size();
  const std::size_t n = cols.size();
  std::vector<std::vector<std::size_t>> perms(n, std::vector<std::size_t>(m));
  for (auto& p : perms) std::iota(p.begin(), p.end(), 0);
  std::optional<Rational> best;
  while (true) {
    Rational worst = 0;
    for (std::size_t i = 0; i < m; ++i) {
      Rational s = 0;
      for (std::size_t j = 0; j < n; ++j) s += cols[j][perms[j][i]];
      if (i == 0 || s > worst) worst = s;
    }
    if (!best || worst < *best) best = worst;
    // odometer over permutations of columns 1..n-1
    std::size_t j = 1;
    while (j < n && !std::next_permutation(perms[j].begin(), perms[j].end())) ++j;
    if (j >= n) break;
  }
  return *best;
}

/// Whether some arrangement gives every row the same sum.
inline bool has_exact_arrangement(const std::vector<std::vector<Rational>>& cols) {
  Rational total = 0;
  for (const auto& c : cols)
    for (const auto& v : c) total += v;
  return min_max_row_sum(cols) * static_cast<long>(cols.front().size()) == total;
}

inline Rational binomial_pmf(long n, long k, const Rational& p) {
  Rational c = 1;
  for (long i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  Rational out = c;
  for (long i = 0; i < k; ++i) out *= p;
  for (long i = 0; i < n - k; ++i) out *= (1 - p);
  return out;
}

/// a + (b-a)/n <= mu <= b - (b-a)/n written as two products to avoid division.
inline bool mean_condition(const Rational& a, const Rational& b, const Rational& mu, long n) {
  return n * (mu - a) >= (b - a) && n * (b - mu) >= (b - a);
}

/// (1/(1-p)) * int_p^1 (a + (b-a) u) du for U[a,b].
inline Rational uniform_upper_tail_mean(const Rational& a, const Rational& b, const Rational& p) {
  return a + (b - a) * (1 + p) / 2;
}

/// Expectation of g under a discrete law.
template <class G>
Rational expect(const DiscreteDistribution& d, G g) {
  Rational out = 0;
  for (std::size_t k = 0; k < d.size(); ++k) out += d.weights()[k] * g(d.points()[k]);
  return out;
}

/// Random law with at most `max_support` integer atoms in [0, range] and
/// weights k/m.
inline DiscreteDistribution random_discrete(std::mt19937_64& rng, std::size_t m, std::size_t max_support,
                                            int range) {
  std::uniform_int_distribution<int> value(0, range);
  std::vector<Rational> atoms;
  while (true) {
    atoms.clear();
    for (std::size_t i = 0; i < m; ++i) atoms.emplace_back(value(rng));
    std::vector<Rational> sorted = atoms;
    std::sort(sorted.begin(), sorted.end());
    if (static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin()) <= max_support) break;
  }
  return equal_weight(atoms);
}

/// Column of atoms of a law with weights k/m.
inline std::vector<Rational> atoms_of(const DiscreteDistribution& d, std::size_t m) {
  std::vector<Rational> out;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const Rational copies = d.weights()[k] * static_cast<long>(m);
    for (long c = 0; c < copies; ++c) out.push_back(d.points()[k]);
  }
  return out;
}

}  // namespace mix::oracle
