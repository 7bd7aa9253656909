#include <cmath>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "mix/construct.hpp"
#include "mix/error.hpp"
#include "mix/lpcert.hpp"
#include "oracles.hpp"

using namespace mix;
using oracle::q;

TEST(Decompose, Examples) {
  const std::vector<Rational> a{0, 1, 2};
  auto v = discrete_cm_decompose(equal_weight(a), 3);
  ASSERT_EQ(v.status, Status::Mixable);
  auto mix = std::get<UniformBlockMixture>(v.certificate);
  ASSERT_EQ(mix.blocks.size(), 1u);
  EXPECT_EQ(mix.blocks[0], a);
  EXPECT_EQ(mix.weights[0], 1);

  const std::vector<Rational> pts{0, 1, 2}, w{q("1/4"), q("1/2"), q("1/4")};
  const auto binom = make_discrete(pts, w);
  v = discrete_cm_decompose(binom, 2);
  ASSERT_EQ(v.status, Status::Mixable);
  mix = std::get<UniformBlockMixture>(v.certificate);
  EXPECT_EQ(mix.center, 1);
  std::map<std::vector<Rational>, Rational> blocks;
  for (std::size_t k = 0; k < mix.blocks.size(); ++k) blocks[mix.blocks[k]] += mix.weights[k];
  EXPECT_EQ(blocks.size(), 2u);
  EXPECT_EQ((blocks[{0, 2}]), q("1/2"));
  EXPECT_EQ((blocks[{1, 1}]), q("1/2"));
  EXPECT_TRUE(verify_block_mixture(binom, mix).ok);

  const std::vector<Rational> bp{0, 1}, bw{q("2/3"), q("1/3")};
  EXPECT_EQ(discrete_cm_decompose(make_discrete(bp, bw), 2).status, Status::NotMixable);
}

TEST(Decompose, BlocksReproduceTheLaw) {
  std::mt19937_64 rng(8);
  int mixable = 0;
  for (int t = 0; t < 150; ++t) {
    const auto law = oracle::random_discrete(rng, 2 + t % 4, 4, 6);
    const std::size_t n = 2 + t % 3;
    const auto v = discrete_cm_decompose(law, n);
    if (v.status != Status::Mixable) continue;
    ++mixable;
    const auto& mix = std::get<UniformBlockMixture>(v.certificate);
    std::map<Rational, Rational> mass;
    for (std::size_t k = 0; k < mix.blocks.size(); ++k) {
      Rational sum = 0;
      for (const auto& x : mix.blocks[k]) {
        sum += x;
        mass[x] += mix.weights[k] / static_cast<long>(n);
      }
      EXPECT_EQ(sum / static_cast<long>(n), law.mean());
    }
    for (std::size_t k = 0; k < law.size(); ++k) EXPECT_EQ(mass[law.points()[k]], law.weights()[k]);
    EXPECT_EQ(mass.size(), law.size());
  }
  EXPECT_GT(mixable, 10);
}

TEST(Binary, Examples) {
  auto layers = binary_decompose({{2, 1}});
  ASSERT_EQ(layers.layers.size(), 1u);
  using V = std::vector<std::uint8_t>;
  EXPECT_EQ(layers.layers[0], (std::vector<V>{{1, 0}, {1, 0}, {0, 1}}));

  layers = binary_decompose({{0, 0, 4}});
  EXPECT_EQ(layers.layers[0], (std::vector<V>(4, V{0, 0, 1})));

  BinaryLayerList list;
  list.dims = 2;
  list.count = 3;
  list.layers = {{{1, 0}, {1, 0}, {0, 1}}};
  EXPECT_EQ(binary_compose(list), (IntTable{{2, 1}}));

  list.count = 0;
  list.layers = {{}};
  EXPECT_EQ(binary_compose(list), (IntTable{{0, 0}}));
}

TEST(Binary, RejectsBadLayers) {
  BinaryLayerList list;
  list.dims = 2;
  list.count = 1;
  list.layers = {{{1, 1}}};
  EXPECT_THROW(binary_compose(list), InvalidInput);
  EXPECT_THROW(binary_decompose({{1, -1}}), InvalidInput);
}

TEST(UniformLayers, BinomialMarginals) {
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto pmf = uniform_layer_law(n, n);
    std::vector<std::map<Rational, Rational>> marg(n);
    Rational total = 0;
    for (std::size_t k = 0; k < pmf.points.size(); ++k) {
      Rational sum = 0;
      for (std::size_t i = 0; i < n; ++i) {
        marg[i][pmf.points[k][i]] += pmf.masses[k];
        sum += pmf.points[k][i];
      }
      EXPECT_EQ(sum, static_cast<long>(n));
      total += pmf.masses[k];
    }
    EXPECT_EQ(total, 1);
    for (const auto& m : marg) {
      for (long k = 0; k <= static_cast<long>(n); ++k) {
        const auto it = m.find(Rational(k));
        const Rational got = it == m.end() ? Rational(0) : it->second;
        EXPECT_EQ(got, oracle::binomial_pmf(n, k, Rational(1, n)));
      }
    }
  }
}

TEST(Gaussian, Examples) {
  const std::vector<Rational> zeros2(2, 0), zeros3(3, 0);
  const std::vector<Rational> s11{1, 1};
  auto v = gaussian_joint_mix(zeros2, s11);
  ASSERT_EQ(v.status, Status::Mixable);
  const auto& g = std::get<GaussianMixCertificate>(v.certificate);
  EXPECT_NEAR(g.corr[0][1], -1, 1e-12);
  EXPECT_NEAR(g.corr[1][0], -1, 1e-12);

  const std::vector<Rational> s123{1, 2, 3}, s113{1, 1, 3};
  v = gaussian_joint_mix(zeros3, s123);
  ASSERT_EQ(v.status, Status::Mixable);
  const auto& h = std::get<GaussianMixCertificate>(v.certificate);
  EXPECT_TRUE(verify_gaussian(h).ok);
  double quad = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) quad += h.sigmas[i] * h.corr[i][j] * h.sigmas[j];
  EXPECT_LE(std::abs(quad), 1e-10 * 36);

  EXPECT_EQ(gaussian_joint_mix(zeros3, s113).status, Status::NotMixable);
}

TEST(Gaussian, VerifierRejectsBrokenMatrices) {
  GaussianMixCertificate g{{0, 0}, {1, 1}, {{1, 1}, {1, 1}}};
  EXPECT_FALSE(verify_gaussian(g).ok);
  g.corr = {{1, -1}, {-1, 0.9}};
  EXPECT_FALSE(verify_gaussian(g).ok);
  g.corr = {{1, -2}, {-2, 1}};
  EXPECT_FALSE(verify_gaussian(g).ok);
}

TEST(Sample, LatinSquareRows) {
  const std::vector<Rational> a{0, 1, 2};
  ArrangementCertificate cert{{a, a, a}, Arrangement{{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}}, 3};
  const auto table = sample_joint_mix(cert, 6, 1);
  const auto& rows = std::get<std::vector<std::vector<Rational>>>(table.rows);
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& r : rows) EXPECT_EQ(r[0] + r[1] + r[2], 3);
}

TEST(Sample, BinomialBlocks) {
  const std::vector<Rational> pts{0, 1, 2}, w{q("1/4"), q("1/2"), q("1/4")};
  const auto v = discrete_cm_decompose(make_discrete(pts, w), 2);
  const auto table = sample_joint_mix(v.certificate, 10000, 7);
  const auto& rows = std::get<std::vector<std::vector<Rational>>>(table.rows);
  long ones = 0;
  long first_two = 0, second_two = 0;
  for (const auto& r : rows) {
    EXPECT_EQ(r[0] + r[1], 2);
    for (const auto& x : r) ones += x == 1;
    first_two += r[0] == 2;
    second_two += r[1] == 2;
  }
  EXPECT_NEAR(ones / 20000.0, 0.5, 0.02);
  // exchangeable: both coordinates see the atom 2 equally often
  EXPECT_NEAR(first_two / 10000.0, second_two / 10000.0, 0.03);
  EXPECT_FALSE(table.ks_flagged);
}

TEST(Sample, GaussianRowSums) {
  const std::vector<Rational> mus{1, -2, q("1/2")}, s{1, 2, 3};
  const auto v = gaussian_joint_mix(mus, s);
  const auto table = sample_joint_mix(v.certificate, 1000, 3);
  const auto& rows = std::get<std::vector<std::vector<double>>>(table.rows);
  for (const auto& r : rows) EXPECT_LE(std::abs(r[0] + r[1] + r[2] + 0.5), 1e-8);
  EXPECT_FALSE(table.ks_flagged);
}

TEST(Sample, JointPmfRows) {
  const std::vector<Rational> a{0, 1, 2};
  const std::vector<DiscreteDistribution> three(3, equal_weight(a));
  const auto v = jm_lp_decide(three);
  const auto table = sample_joint_mix(v.certificate, 500, 5);
  for (const auto& r : std::get<std::vector<std::vector<Rational>>>(table.rows)) EXPECT_EQ(r[0] + r[1] + r[2], 3);
}
