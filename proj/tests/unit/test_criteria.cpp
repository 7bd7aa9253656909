#include <random>

#include <gtest/gtest.h>

#include "mix/criteria.hpp"
#include "mix/error.hpp"
#include "mix/lpcert.hpp"
#include "oracles.hpp"

using namespace mix;
using oracle::q;

namespace {

DiscreteDistribution coin(const Rational& lo, const Rational& hi) {
  const std::vector<Rational> pts{lo, hi}, w{q("1/2"), q("1/2")};
  return make_discrete(pts, w);
}

SupportInterval interval(long a, long b) { return {Rational(a), Rational(b)}; }

}  // namespace

TEST(MeanCondition, Examples) {
  EXPECT_TRUE(mean_condition(interval(0, 1), q("1/2"), 2));
  EXPECT_FALSE(mean_condition(interval(0, 1), q("1/4"), 3));
  EXPECT_TRUE(mean_condition({q(3), q(3)}, q(3), 5));
  EXPECT_THROW(mean_condition({Rational(0), std::nullopt}, 1, 2), InvalidInput);
}

TEST(MonotoneDensity, Examples) {
  const auto dec = monotone_density(0, 1, q("1/4"), Direction::Decreasing);
  EXPECT_EQ(cm_monotone_density(dec, 4).status, Status::Mixable);
  EXPECT_EQ(cm_monotone_density(dec, 3).status, Status::NotMixable);
  for (auto dir : {Direction::Increasing, Direction::Decreasing}) {
    EXPECT_EQ(cm_monotone_density(monotone_density(-3, 5, 1, dir), 2).status, Status::Mixable);
  }
}

TEST(ConcaveDensity, Examples) {
  EXPECT_EQ(cm_concave_density(concave_density(0, 1), 3).status, Status::Mixable);
  EXPECT_EQ(cm_concave_density(concave_density(0, 1), 2).status, Status::Unknown);
  EXPECT_EQ(cm_concave_density(concave_density(0, 1), 7).status, Status::Mixable);
}

TEST(DensityFloor, Examples) {
  EXPECT_EQ(cm_density_floor(bounded_below_density(0, 1, 1), 3).status, Status::Mixable);
  EXPECT_EQ(cm_density_floor(bounded_below_density(0, 1, q("0.5")), 6).status, Status::Mixable);
  EXPECT_EQ(cm_density_floor(bounded_below_density(0, 1, q("0.1")), 4).status, Status::Unknown);
}

TEST(MonotoneDensities, JointExamples) {
  std::vector<DistributionSpec> specs{monotone_density(0, 1, q("0.6"), Direction::Increasing),
                                      monotone_density(0, 1, q("0.6"), Direction::Increasing),
                                      monotone_density(0, 2, q("0.8"), Direction::Increasing)};
  EXPECT_EQ(jm_monotone_densities(specs).status, Status::Mixable);
  specs[2] = monotone_density(0, 2, q("0.9"), Direction::Increasing);
  EXPECT_EQ(jm_monotone_densities(specs).status, Status::NotMixable);

  // one marginal: only a point mass is 1-CM
  const std::vector<DistributionSpec> single{monotone_density(0, 1, q("1/2"), Direction::Decreasing)};
  EXPECT_EQ(jm_monotone_densities(single).status, Status::NotMixable);
}

TEST(Elliptical, Examples) {
  auto sigmas = [](std::vector<long> s) {
    std::vector<DistributionSpec> out;
    for (long v : s) out.push_back(elliptical(0, v, "t3"));
    return out;
  };
  EXPECT_EQ(jm_elliptical(sigmas({1, 2, 3})).status, Status::Mixable);
  EXPECT_EQ(jm_elliptical(sigmas({1, 1, 3})).status, Status::NotMixable);
  EXPECT_EQ(jm_elliptical(sigmas({4, 4})).status, Status::Mixable);
  const std::vector<DistributionSpec> mixed{elliptical(0, 1, "t3"), elliptical(0, 1, "logistic")};
  EXPECT_THROW(jm_elliptical(mixed), InvalidInput);
}

TEST(NormCheck, SymmetricPairHasNoViolations) {
  const std::vector<DiscreteDistribution> m{coin(0, 1), coin(0, 1)};
  NormCheckOptions o;
  o.include_mean_split = false;
  o.splits = {{q("1/2"), q("1/2")}};
  EXPECT_TRUE(norm_check(m, 1, o).ok());
}

TEST(NormCheck, ReportsInfinityViolation) {
  const std::vector<DiscreteDistribution> m{coin(0, 3), coin(0, 1)};
  NormCheckOptions o;
  o.include_mean_split = false;
  o.splits = {{q("1.5"), q("0.5")}};
  o.p_grid = {NormOrder::infinity()};
  const auto r = norm_check(m, 2, o);
  ASSERT_FALSE(r.ok());
  bool found = false;
  for (const auto& v : r.violations) {
    EXPECT_TRUE(verify_norm_violation(m, v).ok);
    if (v.index == 0u && v.inequality == 1) {
      EXPECT_DOUBLE_EQ(v.lhs, 1.5);
      EXPECT_DOUBLE_EQ(v.rhs, 0.5);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(NormCheck, InfinityAtMeanMatchesMeanCondition) {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    const auto d = oracle::random_discrete(rng, 1 + t % 5, 4, 8);
    const long n = 2 + t % 4;
    if (d.is_point_mass()) continue;
    const std::vector<DiscreteDistribution> copies(n, d);
    NormCheckOptions o;
    o.p_grid = {NormOrder::infinity()};
    o.t_grid = {d.mean()};
    o.include_mean_split = false;
    o.splits = {std::vector<Rational>(n, d.mean())};
    const auto r = norm_check(copies, d.mean() * n, o);
    const bool cm_ok = std::none_of(r.violations.begin(), r.violations.end(),
                                    [](const NormViolation& v) { return !v.index.has_value(); });
    EXPECT_EQ(cm_ok, oracle::mean_condition(d.min(), d.max(), d.mean(), n));
    ++checked;
  }
  EXPECT_GT(checked, 300);
}

TEST(NormCheck, ExactNormsAgainstDefinition) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto d = oracle::random_discrete(rng, 4, 4, 9);
    const Rational c = q(t % 10, 2);
    const Rational l1 = oracle::expect(d, [&](const Rational& x) { return x > c ? Rational(x - c) : Rational(0); });
    EXPECT_NEAR(positive_part_norm(d, c, {1}), to_double(l1), 1e-12);
    const Rational l2 = oracle::expect(d, [&](const Rational& x) { return x < c ? Rational((c - x) * (c - x)) : Rational(0); });
    EXPECT_NEAR(negative_part_norm(d, c, {2}), std::sqrt(to_double(l2)), 1e-12);
    Rational sup = 0;
    for (const auto& x : d.points()) if (x > c) sup = std::max(sup, Rational(x - c));
    EXPECT_EQ(positive_part_norm(d, c, NormOrder::infinity()), to_double(sup));
  }
}

TEST(Decide, Examples) {
  DecideOptions o;
  o.n = 2;
  const std::vector<DistributionSpec> u{uniform(0, 1)};
  EXPECT_EQ(decide(u, o).status, Status::Mixable);

  const std::vector<DistributionSpec> normals{normal(0, 1), normal(0, 2), normal(0, 3)};
  const auto g = decide(normals);
  EXPECT_EQ(g.status, Status::Mixable);
  EXPECT_TRUE(verify_verdict(normals, g).ok);

  const std::vector<Rational> pts{0, 1}, w{q("2/3"), q("1/3")};
  const std::vector<DistributionSpec> bern{discrete(make_discrete(pts, w))};
  const auto b = decide(bern, o);
  EXPECT_EQ(b.status, Status::NotMixable);
  EXPECT_TRUE(std::holds_alternative<DualCertificate>(b.certificate));
  EXPECT_TRUE(verify_verdict(bern, b, o).ok);
}

// x -> c x + d with c > 0 leaves every verdict unchanged.
TEST(Decide, ScaleAndShiftCovariance) {
  const Rational c = q("5/2"), d = q(-3);
  auto map = [&](const Rational& x) { return c * x + d; };
  struct Case {
    std::vector<DistributionSpec> specs;
    std::vector<DistributionSpec> mapped;
    std::optional<std::size_t> n;
  };
  std::vector<Case> cases;
  for (long n : {2, 3, 4, 6}) {
    cases.push_back({{monotone_density(0, 1, q("1/4"), Direction::Decreasing)},
                     {monotone_density(map(0), map(1), map(q("1/4")), Direction::Decreasing)}, n});
    cases.push_back({{concave_density(0, 1)}, {concave_density(map(0), map(1))}, n});
    cases.push_back({{bounded_below_density(0, 1, q("1/2"))}, {bounded_below_density(map(0), map(1), q("1/2") / c)}, n});
    cases.push_back({{uniform(0, 1)}, {uniform(map(0), map(1))}, n});
  }
  cases.push_back({{monotone_density(0, 1, q("0.6"), Direction::Increasing),
                    monotone_density(0, 2, q("0.8"), Direction::Increasing),
                    monotone_density(0, 1, q("0.6"), Direction::Increasing)},
                   {monotone_density(map(0), map(1), map(q("0.6")), Direction::Increasing),
                    monotone_density(map(0), map(2), map(q("0.8")), Direction::Increasing),
                    monotone_density(map(0), map(1), map(q("0.6")), Direction::Increasing)},
                   std::nullopt});
  cases.push_back({{elliptical(1, 1, "t"), elliptical(2, 1, "t"), elliptical(0, 3, "t")},
                   {elliptical(map(1), c, "t"), elliptical(map(2), c, "t"), elliptical(map(0), 3 * c, "t")},
                   std::nullopt});
  std::mt19937_64 rng(9);
  for (int t = 0; t < 40; ++t) {
    std::vector<DistributionSpec> a, b;
    for (int j = 0; j < 2 + t % 2; ++j) {
      const auto law = oracle::random_discrete(rng, 3, 3, 4);
      std::vector<Rational> pts;
      for (const auto& x : law.points()) pts.push_back(map(x));
      a.push_back(discrete(law));
      b.push_back(discrete(make_discrete(pts, law.weights())));
    }
    cases.push_back({a, b, std::nullopt});
  }
  for (const auto& k : cases) {
    DecideOptions o;
    o.n = k.n;
    EXPECT_EQ(decide(k.specs, o).status, decide(k.mapped, o).status) << kind_name(k.specs.front());
  }
}
