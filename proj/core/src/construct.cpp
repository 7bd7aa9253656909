#include "mix/construct.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>

#include "mix/error.hpp"

namespace mix {
namespace {

std::mt19937_64 row_stream(std::uint64_t seed, std::size_t row) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(static_cast<std::uint64_t>(row) >> 32)};
  return std::mt19937_64(seq);
}

std::size_t draw_index(const std::vector<double>& cumulative, std::mt19937_64& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, cumulative.back())(rng);
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

std::vector<double> cumulative_of(const std::vector<Rational>& weights) {
  std::vector<double> out;
  out.reserve(weights.size());
  double acc = 0;
  for (const auto& w : weights) out.push_back(acc += to_double(w));
  return out;
}

double discrete_ks(const DiscreteDistribution& target, std::vector<Rational> sample) {
  std::sort(sample.begin(), sample.end());
  const double count = static_cast<double>(sample.size());
  double worst = 0;
  double target_cdf = 0;
  std::size_t below = 0;
  for (std::size_t k = 0; k < target.size(); ++k) {
    target_cdf += to_double(target.weights()[k]);
    while (below < sample.size() && sample[below] <= target.points()[k]) ++below;
    worst = std::max(worst, std::abs(static_cast<double>(below) / count - target_cdf));
  }
  return worst;
}

double normal_ks(double mu, double sigma, std::vector<double> sample) {
  if (sigma <= 0) return 0;
  std::sort(sample.begin(), sample.end());
  const boost::math::normal_distribution<double> law(mu, sigma);
  const double count = static_cast<double>(sample.size());
  double worst = 0;
  for (std::size_t k = 0; k < sample.size(); ++k) {
    const double f = boost::math::cdf(law, sample[k]);
    worst = std::max({worst, static_cast<double>(k + 1) / count - f, f - static_cast<double>(k) / count});
  }
  return worst;
}

// Target marginals of a discrete certificate.
std::vector<DiscreteDistribution> discrete_marginals(const Certificate& certificate) {
  std::vector<DiscreteDistribution> out;
  if (const auto* a = std::get_if<ArrangementCertificate>(&certificate)) {
    for (const auto& c : a->columns) out.push_back(equal_weight(c));
  } else if (const auto* b = std::get_if<UniformBlockMixture>(&certificate)) {
    std::vector<Rational> points;
    std::vector<Rational> weights;
    for (std::size_t k = 0; k < b->blocks.size(); ++k) {
      const Rational share = b->weights[k] / static_cast<long>(b->blocks[k].size());
      for (const auto& v : b->blocks[k]) {
        points.push_back(v);
        weights.push_back(share);
      }
    }
    const auto law = make_discrete(points, weights);
    out.assign(b->blocks.front().size(), law);
  } else if (const auto* p = std::get_if<JointPmf>(&certificate)) {
    const std::size_t n = p->points.front().size();
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Rational> points;
      for (const auto& pt : p->points) points.push_back(pt[i]);
      out.push_back(make_discrete(points, p->masses));
    }
  }
  return out;
}

}  // namespace

Verdict discrete_cm_decompose(const DiscreteDistribution& law, std::size_t n, const MatrixMixOptions& options) {
  if (n == 0) throw InvalidInput("n must be at least 1");
  const std::vector<DiscreteDistribution> copies(n, law);
  Verdict verdict = jm_from_matrix(copies, options);
  if (verdict.status != Status::Mixable) return verdict;

  const auto& cert = std::get<ArrangementCertificate>(verdict.certificate);
  const std::size_t m = cert.columns.front().size();
  std::map<std::vector<Rational>, std::size_t> counts;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Rational> block;
    block.reserve(n);
    for (std::size_t j = 0; j < n; ++j) block.push_back(cert.columns[j][cert.arrangement.perms[j][i]]);
    std::sort(block.begin(), block.end());
    ++counts[block];
  }
  UniformBlockMixture mixture;
  mixture.center = cert.center / static_cast<long>(n);
  for (const auto& [block, count] : counts) {
    mixture.blocks.push_back(block);
    mixture.weights.emplace_back(static_cast<long>(count), static_cast<long>(m));
  }
  return Verdict::mixable("uniform-block-decomposition", std::move(mixture), verdict.diagnostic);
}

Validation verify_block_mixture(const DiscreteDistribution& target, const UniformBlockMixture& mixture) {
  if (mixture.blocks.empty() || mixture.blocks.size() != mixture.weights.size()) {
    return Validation::fail("blocks and weights must be non-empty and of equal length");
  }
  const std::size_t n = mixture.blocks.front().size();
  Rational total = 0;
  std::map<Rational, Rational> law;
  for (std::size_t k = 0; k < mixture.blocks.size(); ++k) {
    const auto& block = mixture.blocks[k];
    if (block.size() != n || n == 0) return Validation::fail("blocks differ in size");
    if (mixture.weights[k] <= 0) return Validation::fail("block weights must be positive");
    Rational sum = 0;
    for (const auto& v : block) sum += v;
    if (sum != mixture.center * static_cast<long>(n)) {
      return Validation::fail("block " + std::to_string(k) + " does not average to the center");
    }
    total += mixture.weights[k];
    for (const auto& v : block) law[v] += mixture.weights[k] / static_cast<long>(n);
  }
  if (total != 1) return Validation::fail("block weights do not sum to 1");
  if (law.size() != target.size()) return Validation::fail("mixture support differs from the target");
  std::size_t k = 0;
  for (const auto& [point, weight] : law) {
    if (point != target.points()[k] || weight != target.weights()[k]) {
      return Validation::fail("mixture marginal differs from the target at " + to_string(point));
    }
    ++k;
  }
  return Validation::pass();
}

BinaryLayerList binary_decompose(const IntTable& realizations) {
  BinaryLayerList out;
  if (realizations.empty()) return out;
  const std::size_t n = realizations.front().size();
  if (n == 0) throw InvalidInput("realizations need at least one coordinate");
  std::int64_t total = -1;
  for (const auto& row : realizations) {
    if (row.size() != n) throw InvalidInput("realizations differ in dimension");
    std::int64_t sum = 0;
    for (const auto v : row) {
      if (v < 0) throw InvalidInput("binary decomposition needs nonnegative integers");
      sum += v;
    }
    if (total >= 0 && sum != total) throw InvalidInput("realizations do not share a constant sum");
    total = sum;
  }
  out.dims = n;
  out.count = static_cast<std::size_t>(total);
  out.layers.reserve(realizations.size());
  for (const auto& row : realizations) {
    std::vector<std::int64_t> prefix(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + row[i];
    std::vector<std::vector<std::uint8_t>> layers(out.count, std::vector<std::uint8_t>(n, 0));
    for (std::size_t k = 1; k <= out.count; ++k) {
      const auto level = static_cast<std::int64_t>(k);
      for (std::size_t i = 0; i < n; ++i) {
        const int y = static_cast<int>(prefix[i + 1] >= level) - static_cast<int>(prefix[i] >= level);
        layers[k - 1][i] = static_cast<std::uint8_t>(y);
      }
    }
    out.layers.push_back(std::move(layers));
  }
  return out;
}

IntTable binary_compose(const BinaryLayerList& list) {
  IntTable out;
  out.reserve(list.layers.size());
  for (const auto& layers : list.layers) {
    if (layers.size() != list.count) throw InvalidInput("realization has the wrong number of layers");
    std::vector<std::int64_t> row(list.dims, 0);
    for (const auto& layer : layers) {
      if (layer.size() != list.dims) throw InvalidInput("layer has the wrong dimension");
      int ones = 0;
      for (std::size_t i = 0; i < list.dims; ++i) {
        if (layer[i] > 1) throw InvalidInput("layer entries must be 0 or 1");
        ones += layer[i];
        row[i] += layer[i];
      }
      if (ones != 1) throw InvalidInput("layer is not binary multinomial");
    }
    out.push_back(std::move(row));
  }
  return out;
}

JointPmf uniform_layer_law(std::size_t n, std::size_t layers) {
  if (n == 0) throw InvalidInput("dimension must be at least 1");
  double draws = std::pow(static_cast<double>(n), static_cast<double>(layers));
  if (draws > 2e8) throw BudgetExceeded("enumerating n^N layer draws exceeds 2e8");
  if (std::pow(static_cast<double>(layers + 1), static_cast<double>(n)) > 1.8e19) {
    throw BudgetExceeded("outcome encoding overflows");
  }
  const std::uint64_t base = layers + 1;
  std::vector<std::uint64_t> weight(n, 1);
  for (std::size_t i = 1; i < n; ++i) weight[i] = weight[i - 1] * base;

  // Odometer over the hot index of every layer, keeping the composed counts.
  std::vector<std::size_t> hot(layers, 0);
  std::uint64_t key = static_cast<std::uint64_t>(layers) * weight[0];
  std::unordered_map<std::uint64_t, std::uint64_t> tally;
  std::uint64_t total = 0;
  while (true) {
    ++tally[key];
    ++total;
    std::size_t k = 0;
    for (; k < layers; ++k) {
      key -= weight[hot[k]];
      if (++hot[k] < n) {
        key += weight[hot[k]];
        break;
      }
      hot[k] = 0;
      key += weight[0];
    }
    if (k == layers) break;
  }

  std::vector<std::pair<std::vector<Rational>, std::uint64_t>> outcomes;
  outcomes.reserve(tally.size());
  for (const auto& [code, count] : tally) {
    std::vector<Rational> point(n);
    std::uint64_t rest = code;
    for (std::size_t i = 0; i < n; ++i) {
      point[i] = static_cast<long>(rest % base);
      rest /= base;
    }
    outcomes.emplace_back(std::move(point), count);
  }
  std::sort(outcomes.begin(), outcomes.end());
  JointPmf pmf;
  pmf.center = static_cast<long>(layers);
  for (auto& [point, count] : outcomes) {
    pmf.points.push_back(std::move(point));
    pmf.masses.emplace_back(BigInt(count), BigInt(total));
  }
  return pmf;
}

Verdict gaussian_joint_mix(std::span<const Rational> mus, std::span<const Rational> sigmas) {
  const std::size_t n = sigmas.size();
  if (n == 0 || mus.size() != n) throw InvalidInput("mus and sigmas must be non-empty and of equal length");
  Rational total = 0;
  Rational largest = 0;
  for (const auto& s : sigmas) {
    if (s < 0) throw InvalidInput("sigmas must be nonnegative");
    total += s;
    largest = std::max(largest, s);
  }
  std::ostringstream diag;
  diag << "sum sigma = " << to_string(total) << ", 2 max sigma = " << to_string(Rational(2 * largest));
  if (total < 2 * largest) return Verdict::not_mixable("variance-condition", {}, diag.str());

  GaussianMixCertificate cert;
  cert.mus = to_doubles(std::vector<Rational>(mus.begin(), mus.end()));
  cert.sigmas = to_doubles(std::vector<Rational>(sigmas.begin(), sigmas.end()));

  // Unit vectors u_i with sum sigma_i u_i = 0: split the sigmas into three
  // groups, none above half the total, and close them as a triangle.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return sigmas[l] > sigmas[r]; });
  std::array<Rational, 3> load{0, 0, 0};
  std::vector<std::size_t> group(n, 0);
  for (const std::size_t i : order) {
    const auto g = static_cast<std::size_t>(std::min_element(load.begin(), load.end()) - load.begin());
    group[i] = g;
    load[g] += sigmas[i];
  }
  std::array<std::array<double, 2>, 3> dir{{{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}}};
  const std::array<double, 3> side{to_double(load[0]), to_double(load[1]), to_double(load[2])};
  const int empty_groups = static_cast<int>(std::count(side.begin(), side.end(), 0.0));
  if (empty_groups == 1) {
    // Two equal loads: antithetic.
    std::size_t first = 3;
    for (std::size_t g = 0; g < 3; ++g) {
      if (side[g] == 0.0) continue;
      if (first == 3) {
        first = g;
      } else {
        dir[g] = {-1.0, 0.0};
      }
    }
  } else if (empty_groups == 0) {
    const double cos_phi =
        std::clamp((side[2] * side[2] - side[0] * side[0] - side[1] * side[1]) / (2 * side[0] * side[1]), -1.0, 1.0);
    const double sin_phi = std::sqrt(std::max(0.0, 1 - cos_phi * cos_phi));
    dir[1] = {cos_phi, sin_phi};
    const double x3 = -side[0] - side[1] * cos_phi;
    const double y3 = -side[1] * sin_phi;
    const double norm3 = std::hypot(x3, y3);
    dir[2] = {x3 / norm3, y3 / norm3};
  }
  cert.corr.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& u = dir[group[i]];
      const auto& v = dir[group[j]];
      cert.corr[i][j] = i == j ? 1.0 : u[0] * v[0] + u[1] * v[1];
    }
  }
  if (const auto check = verify_gaussian(cert); !check) {
    return Verdict::unknown("variance-condition", "construction failed validation: " + check.reason);
  }
  return Verdict::mixable("variance-condition", std::move(cert), diag.str());
}

Validation verify_gaussian(const GaussianMixCertificate& cert) {
  const std::size_t n = cert.sigmas.size();
  if (n == 0 || cert.mus.size() != n || cert.corr.size() != n) return Validation::fail("dimension mismatch");
  Eigen::MatrixXd r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (cert.corr[i].size() != n) return Validation::fail("correlation matrix is not square");
    if (cert.sigmas[i] < 0) return Validation::fail("negative sigma");
    for (std::size_t j = 0; j < n; ++j) r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cert.corr[i][j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(cert.corr[i][i] - 1.0) > 1e-12) return Validation::fail("diagonal entry differs from 1");
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(cert.corr[i][j] - cert.corr[j][i]) > 1e-12) return Validation::fail("matrix is not symmetric");
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) return Validation::fail("matrix is not positive semidefinite");
  const Eigen::Map<const Eigen::VectorXd> sigma(cert.sigmas.data(), static_cast<Eigen::Index>(n));
  const double quad = sigma.dot(r * sigma);
  const double scale = sigma.sum();
  if (quad > 1e-10 * scale * scale) return Validation::fail("sigma^T R sigma is not zero");
  return Validation::pass();
}

std::size_t SampleTable::size() const {
  return std::visit([](const auto& r) { return r.size(); }, rows);
}

SampleTable sample_joint_mix(const Certificate& certificate, std::size_t count, std::uint64_t seed) {
  SampleTable table;
  const double threshold = count == 0 ? 0.0 : 2.0 / std::sqrt(static_cast<double>(count));

  if (const auto* g = std::get_if<GaussianMixCertificate>(&certificate)) {
    if (const auto check = verify_gaussian(*g); !check) throw InvalidInput("invalid Gaussian certificate: " + check.reason);
    const auto n = static_cast<Eigen::Index>(g->sigmas.size());
    Eigen::MatrixXd r(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) r(i, j) = g->corr[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    // Square root from the eigen decomposition. Round-off sized eigenvalues
    // are dropped rather than square-rooted, which would turn 1e-16 noise
    // into 1e-8 noise in the row sums.
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r);
    const double cutoff = 1e-12 * std::max(1.0, eig.eigenvalues().maxCoeff());
    Eigen::VectorXd scale(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double lambda = eig.eigenvalues()(k);
      scale(k) = lambda > cutoff ? std::sqrt(lambda) : 0.0;
    }
    Eigen::MatrixXd root = eig.eigenvectors() * scale.asDiagonal();
    // Remove what is left of the sigma direction so sum sigma_i z_i = 0.
    Eigen::VectorXd sig(n);
    for (Eigen::Index i = 0; i < n; ++i) sig(i) = g->sigmas[static_cast<std::size_t>(i)];
    if (sig.squaredNorm() > 0) root -= sig * (sig.transpose() * root) / sig.squaredNorm();
    std::vector<std::vector<double>> rows(count, std::vector<double>(g->sigmas.size()));
    for (std::size_t row = 0; row < count; ++row) {
      auto rng = row_stream(seed, row);
      std::normal_distribution<double> gauss;
      Eigen::VectorXd w(n);
      for (Eigen::Index k = 0; k < n; ++k) w(k) = gauss(rng);
      const Eigen::VectorXd z = root * w;
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        rows[row][ui] = g->mus[ui] + g->sigmas[ui] * z(i);
      }
    }
    for (std::size_t i = 0; i < g->sigmas.size(); ++i) {
      std::vector<double> column;
      column.reserve(count);
      for (const auto& row : rows) column.push_back(row[i]);
      table.ks_distance.push_back(count == 0 ? 0.0 : normal_ks(g->mus[i], g->sigmas[i], std::move(column)));
    }
    table.rows = std::move(rows);
  } else {
    std::vector<std::vector<Rational>> rows;
    rows.reserve(count);
    if (const auto* a = std::get_if<ArrangementCertificate>(&certificate)) {
      const std::size_t m = a->columns.front().size();
      if (!is_valid(a->arrangement, m, a->columns.size())) throw InvalidInput("arrangement does not match the columns");
      for (std::size_t row = 0; row < count; ++row) {
        auto rng = row_stream(seed, row);
        const std::size_t u = std::uniform_int_distribution<std::size_t>(0, m - 1)(rng);
        std::vector<Rational> out;
        for (std::size_t j = 0; j < a->columns.size(); ++j) out.push_back(a->columns[j][a->arrangement.perms[j][u]]);
        rows.push_back(std::move(out));
      }
    } else if (const auto* b = std::get_if<UniformBlockMixture>(&certificate)) {
      if (b->blocks.empty() || b->blocks.size() != b->weights.size()) throw InvalidInput("empty block mixture");
      const auto cumulative = cumulative_of(b->weights);
      for (std::size_t row = 0; row < count; ++row) {
        auto rng = row_stream(seed, row);
        std::vector<Rational> out = b->blocks[draw_index(cumulative, rng)];
        std::shuffle(out.begin(), out.end(), rng);
        rows.push_back(std::move(out));
      }
    } else if (const auto* p = std::get_if<JointPmf>(&certificate)) {
      if (p->points.empty()) throw InvalidInput("empty joint pmf");
      const auto cumulative = cumulative_of(p->masses);
      for (std::size_t row = 0; row < count; ++row) {
        auto rng = row_stream(seed, row);
        rows.push_back(p->points[draw_index(cumulative, rng)]);
      }
    } else {
      throw InvalidInput("certificate kind cannot be sampled");
    }
    const auto targets = discrete_marginals(certificate);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      std::vector<Rational> column;
      column.reserve(count);
      for (const auto& row : rows) column.push_back(row[i]);
      table.ks_distance.push_back(count == 0 ? 0.0 : discrete_ks(targets[i], std::move(column)));
    }
    table.rows = std::move(rows);
  }
  table.ks_flagged = std::any_of(table.ks_distance.begin(), table.ks_distance.end(),
                                 [&](double d) { return d > threshold; });
  return table;
}

}  // namespace mix
