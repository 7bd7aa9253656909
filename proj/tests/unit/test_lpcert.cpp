#include <random>

#include <gtest/gtest.h>

#include "mix/lpcert.hpp"
#include "mix/rearrange.hpp"
#include "oracles.hpp"

using namespace mix;
using oracle::q;

namespace {

DiscreteDistribution bernoulli(const Rational& p) {
  const std::vector<Rational> pts{0, 1}, w{1 - p, p};
  return make_discrete(pts, w);
}

}  // namespace

TEST(LpDecide, Examples) {
  const std::vector<DiscreteDistribution> half(2, bernoulli(q("1/2")));
  auto v = jm_lp_decide(half);
  ASSERT_EQ(v.status, Status::Mixable);
  const auto& pmf = std::get<JointPmf>(v.certificate);
  EXPECT_EQ(pmf.center, 1);
  EXPECT_TRUE(verify_primal(half, pmf).ok);
  for (std::size_t k = 0; k < pmf.points.size(); ++k) {
    if (pmf.masses[k] != 0) EXPECT_EQ(pmf.masses[k], q("1/2"));
  }

  const std::vector<DiscreteDistribution> third(2, bernoulli(q("1/3")));
  v = jm_lp_decide(third);
  ASSERT_EQ(v.status, Status::NotMixable);
  const auto& dual = std::get<DualCertificate>(v.certificate);
  EXPECT_EQ(dual.center, q("2/3"));
  for (const auto& f : dual.functions)
    for (const auto& x : f.values) EXPECT_EQ(x, 0);
  EXPECT_TRUE(verify_dual(third, dual, dual.center).ok);

  const std::vector<Rational> a{0, 1, 2};
  const std::vector<DiscreteDistribution> three(3, equal_weight(a));
  EXPECT_EQ(hyperplane_grid(three, 3).size(), 7u);
  v = jm_lp_decide(three);
  ASSERT_EQ(v.status, Status::Mixable);
  EXPECT_TRUE(verify_primal(three, std::get<JointPmf>(v.certificate)).ok);
}

TEST(VerifyPrimal, RejectsBrokenPmfs) {
  const std::vector<DiscreteDistribution> half(2, bernoulli(q("1/2")));
  JointPmf good{1, {{0, 1}, {1, 0}}, {q("1/2"), q("1/2")}};
  EXPECT_TRUE(verify_primal(half, good).ok);
  JointPmf skew = good;
  skew.masses = {q("0.6"), q("0.4")};
  EXPECT_FALSE(verify_primal(half, skew).ok);
  JointPmf off{1, {{1, 1}, {0, 0}}, {q("1/2"), q("1/2")}};
  EXPECT_FALSE(verify_primal(half, off).ok);
}

TEST(VerifyDual, BoundaryAndSoundness) {
  const std::vector<Rational> pts{0, 1, 2};
  const std::vector<DiscreteDistribution> m(3, equal_weight(pts));
  DualCertificate flat{3, {}};
  for (int i = 0; i < 3; ++i) flat.functions.push_back({pts, std::vector<Rational>(3, q(1, 3))});
  EXPECT_FALSE(verify_dual(m, flat, 3).ok);

  // the instance is mixable, so no certificate can pass
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> v(-4, 4);
  for (int t = 0; t < 200; ++t) {
    DualCertificate c{3, {}};
    for (int i = 0; i < 3; ++i) {
      std::vector<Rational> vals;
      for (int k = 0; k < 3; ++k) vals.emplace_back(v(rng), 1 + t % 3);
      c.functions.push_back({pts, vals});
    }
    EXPECT_FALSE(verify_dual(m, c, 3).ok);
  }
}

TEST(LpDecide, MutualExclusionOnRandomInstances) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 300; ++t) {
    std::vector<DiscreteDistribution> m;
    const std::size_t rows = 1 + t % 4;
    for (int j = 0; j < 2 + t % 2; ++j) m.push_back(oracle::random_discrete(rng, rows, 4, 5));
    const auto v = jm_lp_decide(m);
    const bool primal = std::holds_alternative<JointPmf>(v.certificate) &&
                        verify_primal(m, std::get<JointPmf>(v.certificate)).ok;
    const auto* dual_cert = std::get_if<DualCertificate>(&v.certificate);
    const bool dual = dual_cert != nullptr && verify_dual(m, *dual_cert, dual_cert->center).ok;
    EXPECT_NE(primal, dual);
    EXPECT_EQ(primal, v.status == Status::Mixable);
    // equal-weight instances also go through the arrangement oracle
    std::vector<std::vector<Rational>> cols;
    for (const auto& d : m) cols.push_back(oracle::atoms_of(d, rows));
    EXPECT_EQ(primal, oracle::has_exact_arrangement(cols));
  }
}

// Deciding {c F_i + d} with K' = c K + n d gives the same status.
TEST(LpDecide, AffineEquivariance) {
  std::mt19937_64 rng(43);
  const Rational c = q("3/2"), d = q("-1/3");
  for (int t = 0; t < 80; ++t) {
    std::vector<DiscreteDistribution> m, mapped;
    for (int j = 0; j < 3; ++j) {
      m.push_back(oracle::random_discrete(rng, 1 + t % 3, 3, 4));
      std::vector<Rational> pts;
      for (const auto& x : m.back().points()) pts.push_back(c * x + d);
      mapped.push_back(make_discrete(pts, m.back().weights()));
    }
    Rational k = 0;
    for (const auto& x : m) k += x.mean();
    const auto a = jm_lp_decide(m, k);
    const auto b = jm_lp_decide(mapped, c * k + 3 * d);
    EXPECT_EQ(a.status, b.status);
    if (const auto* pmf = std::get_if<JointPmf>(&a.certificate)) {
      JointPmf image{c * k + 3 * d, {}, pmf->masses};
      for (const auto& p : pmf->points) {
        std::vector<Rational> y;
        for (const auto& x : p) y.push_back(c * x + d);
        image.points.push_back(y);
      }
      EXPECT_TRUE(verify_primal(mapped, image).ok);
    }
  }
}
