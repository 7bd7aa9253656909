#include "mix/lpcert.hpp"

#include <algorithm>
#include <sstream>

#include "mix/error.hpp"

namespace mix {
namespace {

using IndexPoint = std::vector<std::uint32_t>;

std::vector<IndexPoint> grid_indices(std::span<const DiscreteDistribution> marginals, const Rational& center,
                                     std::uint64_t budget) {
  const std::size_t n = marginals.size();
  if (n == 0) throw InvalidInput("at least one marginal is required");
  // Feasible range of the remaining coordinates' sum, for pruning.
  std::vector<Rational> tail_min(n + 1, Rational(0));
  std::vector<Rational> tail_max(n + 1, Rational(0));
  for (std::size_t i = n; i-- > 0;) {
    tail_min[i] = tail_min[i + 1] + marginals[i].min();
    tail_max[i] = tail_max[i + 1] + marginals[i].max();
  }
  std::vector<IndexPoint> out;
  IndexPoint current(n);
  auto descend = [&](auto& self, std::size_t i, const Rational& remaining) -> void {
    if (remaining < tail_min[i] || remaining > tail_max[i]) return;
    const auto& pts = marginals[i].points();
    if (i + 1 == n) {
      const auto it = std::lower_bound(pts.begin(), pts.end(), remaining);
      if (it != pts.end() && *it == remaining) {
        current[i] = static_cast<std::uint32_t>(it - pts.begin());
        if (out.size() >= budget) {
          throw BudgetExceeded("hyperplane grid exceeds the budget of " + std::to_string(budget) + " points");
        }
        out.push_back(current);
      }
      return;
    }
    for (std::size_t k = 0; k < pts.size(); ++k) {
      current[i] = static_cast<std::uint32_t>(k);
      self(self, i + 1, Rational(remaining - pts[k]));
    }
  };
  descend(descend, 0, center);
  return out;
}

std::vector<std::size_t> row_offsets(std::span<const DiscreteDistribution> marginals) {
  std::vector<std::size_t> offset(marginals.size() + 1, 0);
  for (std::size_t i = 0; i < marginals.size(); ++i) offset[i + 1] = offset[i] + marginals[i].size();
  return offset;
}

// Revised phase-1 simplex over the margin constraints
//   sum_{g : g_i = k} x_g = w_{i,k},  x >= 0,
// with one artificial per row and Bland's rule against cycling.
class PhaseOne {
 public:
  PhaseOne(const std::vector<IndexPoint>& grid, const std::vector<std::size_t>& offset,
           std::span<const DiscreteDistribution> marginals)
      : grid_(grid), offset_(offset), rows_(offset.back()), cols_(grid.size()) {
    basis_.resize(rows_);
    binv_.assign(rows_, std::vector<Rational>(rows_, Rational(0)));
    x_.resize(rows_);
    for (std::size_t i = 0; i < marginals.size(); ++i) {
      for (std::size_t k = 0; k < marginals[i].size(); ++k) x_[offset_[i] + k] = marginals[i].weights()[k];
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      basis_[r] = cols_ + r;
      binv_[r][r] = 1;
    }
  }

  void solve() {
    std::vector<bool> in_basis(cols_ + rows_, false);
    for (const auto v : basis_) in_basis[v] = true;
    while (true) {
      const auto y = duals();
      std::optional<std::size_t> entering;
      for (std::size_t g = 0; g < cols_ && !entering; ++g) {
        if (in_basis[g]) continue;
        Rational reduced = 0;
        for (std::size_t i = 0; i < grid_[g].size(); ++i) reduced -= y[offset_[i] + grid_[g][i]];
        if (reduced < 0) entering = g;
      }
      for (std::size_t r = 0; r < rows_ && !entering; ++r) {
        if (!in_basis[cols_ + r] && 1 - y[r] < 0) entering = cols_ + r;
      }
      if (!entering) return;

      const auto d = direction(*entering);
      std::optional<std::size_t> leave;
      Rational best_ratio;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (d[r] <= 0) continue;
        const Rational ratio = x_[r] / d[r];
        if (!leave || ratio < best_ratio || (ratio == best_ratio && basis_[r] < basis_[*leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (!leave) throw Error("phase-1 simplex reported an unbounded ray");
      pivot(*leave, d);
      in_basis[basis_[*leave]] = false;
      basis_[*leave] = *entering;
      in_basis[*entering] = true;
      ++pivots_;
    }
  }

  /// y = c_B^T B^{-1}, with cost 1 on artificials.
  std::vector<Rational> duals() const {
    std::vector<Rational> y(rows_, Rational(0));
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < cols_) continue;
      for (std::size_t c = 0; c < rows_; ++c) y[c] += binv_[r][c];
    }
    return y;
  }

  Rational infeasibility() const {
    Rational w = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] >= cols_) w += x_[r];
    }
    return w;
  }

  /// Positive grid masses of the final basic solution.
  std::vector<std::pair<std::size_t, Rational>> masses() const {
    std::vector<std::pair<std::size_t, Rational>> out;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < cols_ && x_[r] > 0) out.emplace_back(basis_[r], x_[r]);
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    return out;
  }

  std::size_t pivots() const noexcept { return pivots_; }

 private:
  std::vector<Rational> direction(std::size_t var) const {
    std::vector<Rational> d(rows_, Rational(0));
    if (var >= cols_) {
      for (std::size_t r = 0; r < rows_; ++r) d[r] = binv_[r][var - cols_];
      return d;
    }
    for (std::size_t i = 0; i < grid_[var].size(); ++i) {
      const std::size_t c = offset_[i] + grid_[var][i];
      for (std::size_t r = 0; r < rows_; ++r) d[r] += binv_[r][c];
    }
    return d;
  }

  void pivot(std::size_t p, const std::vector<Rational>& d) {
    const Rational scale = d[p];
    for (auto& v : binv_[p]) v /= scale;
    x_[p] /= scale;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == p || d[r] == 0) continue;
      const Rational factor = d[r];
      for (std::size_t c = 0; c < rows_; ++c) binv_[r][c] -= factor * binv_[p][c];
      x_[r] -= factor * x_[p];
    }
  }

  const std::vector<IndexPoint>& grid_;
  const std::vector<std::size_t>& offset_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::size_t> basis_;
  std::vector<std::vector<Rational>> binv_;
  std::vector<Rational> x_;
  std::size_t pivots_ = 0;
};

DualCertificate zero_certificate(std::span<const DiscreteDistribution> marginals, const Rational& center) {
  DualCertificate cert;
  cert.center = center;
  for (const auto& d : marginals) cert.functions.push_back({d.points(), std::vector<Rational>(d.size(), Rational(0))});
  return cert;
}

std::optional<std::size_t> support_index(const DiscreteDistribution& d, const Rational& value) {
  const auto& pts = d.points();
  const auto it = std::lower_bound(pts.begin(), pts.end(), value);
  if (it == pts.end() || *it != value) return std::nullopt;
  return static_cast<std::size_t>(it - pts.begin());
}

}  // namespace

std::vector<std::vector<Rational>> hyperplane_grid(std::span<const DiscreteDistribution> marginals,
                                                   const Rational& center, std::uint64_t budget) {
  const auto indices = grid_indices(marginals, center, budget);
  std::vector<std::vector<Rational>> out;
  out.reserve(indices.size());
  for (const auto& idx : indices) {
    std::vector<Rational> point;
    point.reserve(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) point.push_back(marginals[i].points()[idx[i]]);
    out.push_back(std::move(point));
  }
  return out;
}

Verdict jm_lp_decide(std::span<const DiscreteDistribution> marginals, std::optional<Rational> center,
                     std::uint64_t budget) {
  if (marginals.empty()) throw InvalidInput("at least one marginal is required");
  for (const auto& d : marginals) {
    if (!d.exact()) throw InvalidInput("exact LP needs rational marginals; float-mode input given");
  }
  if (!center) {
    Rational total = 0;
    for (const auto& d : marginals) total += d.mean();
    center = total;
  }
  const auto grid = grid_indices(marginals, *center, budget);
  if (grid.empty()) {
    return Verdict::not_mixable("lp-dual", zero_certificate(marginals, *center),
                                "no support point lies on the hyperplane sum = " + to_string(*center));
  }

  const auto offset = row_offsets(marginals);
  PhaseOne lp(grid, offset, marginals);
  lp.solve();
  const Rational w = lp.infeasibility();
  std::ostringstream diag;
  diag << "grid " << grid.size() << " points, " << offset.back() << " margin rows, " << lp.pivots() << " pivots";

  if (w == 0) {
    JointPmf pmf;
    pmf.center = *center;
    for (const auto& [g, mass] : lp.masses()) {
      std::vector<Rational> point;
      for (std::size_t i = 0; i < marginals.size(); ++i) point.push_back(marginals[i].points()[grid[g][i]]);
      pmf.points.push_back(std::move(point));
      pmf.masses.push_back(mass);
    }
    if (const auto check = verify_primal(marginals, pmf); !check) {
      throw Error("primal certificate failed re-validation: " + check.reason);
    }
    return Verdict::mixable("lp-primal", std::move(pmf), diag.str());
  }

  // Farkas multipliers: sum_i y(i, x_i) <= 0 on the grid and b^T y = w > 0.
  // f_i = 1/n - y/w gives pointwise sum >= 1 and integral 0.
  const auto y = lp.duals();
  const Rational share(1, static_cast<long>(marginals.size()));
  DualCertificate cert;
  cert.center = *center;
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    FunctionTable f;
    f.points = marginals[i].points();
    for (std::size_t k = 0; k < marginals[i].size(); ++k) f.values.push_back(share - y[offset[i] + k] / w);
    cert.functions.push_back(std::move(f));
  }
  if (const auto check = verify_dual(marginals, cert, *center, budget); !check) {
    throw Error("dual certificate failed re-validation: " + check.reason);
  }
  diag << ", phase-1 infeasibility " << to_string(w);
  return Verdict::not_mixable("lp-dual", std::move(cert), diag.str());
}

Validation verify_primal(std::span<const DiscreteDistribution> marginals, const JointPmf& pmf) {
  const std::size_t n = marginals.size();
  if (pmf.points.size() != pmf.masses.size()) return Validation::fail("points and masses differ in length");
  std::vector<std::vector<Rational>> margin(n);
  for (std::size_t i = 0; i < n; ++i) margin[i].assign(marginals[i].size(), Rational(0));
  Rational total = 0;
  for (std::size_t g = 0; g < pmf.points.size(); ++g) {
    const auto& point = pmf.points[g];
    const auto& mass = pmf.masses[g];
    if (point.size() != n) return Validation::fail("point " + std::to_string(g) + " has the wrong dimension");
    if (mass < 0) return Validation::fail("negative mass at point " + std::to_string(g));
    Rational sum = 0;
    for (const auto& v : point) sum += v;
    if (sum != pmf.center) return Validation::fail("point " + std::to_string(g) + " is off the hyperplane");
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = support_index(marginals[i], point[i]);
      if (!k) {
        if (mass == 0) continue;
        return Validation::fail("mass outside the support of marginal " + std::to_string(i));
      }
      margin[i][*k] += mass;
    }
    total += mass;
  }
  if (total != 1) return Validation::fail("masses do not sum to 1");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < marginals[i].size(); ++k) {
      if (margin[i][k] != marginals[i].weights()[k]) {
        return Validation::fail("margin mismatch for marginal " + std::to_string(i) + " at " +
                                to_string(marginals[i].points()[k]));
      }
    }
  }
  return Validation::pass();
}

Validation verify_dual(std::span<const DiscreteDistribution> marginals, const DualCertificate& cert,
                       const Rational& center, std::uint64_t budget) {
  const std::size_t n = marginals.size();
  if (cert.functions.size() != n) return Validation::fail("one function per marginal is required");
  // f_i evaluated on supp(F_i).
  std::vector<std::vector<Rational>> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = cert.functions[i];
    if (f.points.size() != f.values.size()) return Validation::fail("function table " + std::to_string(i) + " is ragged");
    for (const auto& v : marginals[i].points()) {
      const auto it = std::find(f.points.begin(), f.points.end(), v);
      if (it == f.points.end()) {
        return Validation::fail("function " + std::to_string(i) + " is undefined at " + to_string(v));
      }
      values[i].push_back(f.values[static_cast<std::size_t>(it - f.points.begin())]);
    }
  }
  Rational integral = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < marginals[i].size(); ++k) integral += values[i][k] * marginals[i].weights()[k];
  }
  if (integral >= 1) return Validation::fail("sum of integrals is " + to_string(integral) + ", not below 1");
  for (const auto& point : grid_indices(marginals, center, budget)) {
    Rational sum = 0;
    for (std::size_t i = 0; i < n; ++i) sum += values[i][point[i]];
    if (sum < 1) return Validation::fail("pointwise bound fails on the hyperplane");
  }
  return Validation::pass();
}

}  // namespace mix
