#include <cmath>
#include <random>

#include <boost/math/distributions/normal.hpp>
#include <gtest/gtest.h>

#include "mix/distributions.hpp"
#include "mix/error.hpp"
#include "oracles.hpp"

using namespace mix;
using oracle::q;

TEST(MakeDiscrete, SortsMergesAndNormalizes) {
  const std::vector<Rational> p1{1, 0}, w1{q("1/2"), q("1/2")};
  auto d = make_discrete(p1, w1);
  EXPECT_EQ(d.points(), (std::vector<Rational>{0, 1}));
  EXPECT_EQ(d.weights(), (std::vector<Rational>{q("1/2"), q("1/2")}));

  const std::vector<Rational> p2{0, 0, 1}, w2{q("1/4"), q("1/4"), q("1/2")};
  d = make_discrete(p2, w2);
  EXPECT_EQ(d.points(), (std::vector<Rational>{0, 1}));
  EXPECT_EQ(d.weights(), (std::vector<Rational>{q("1/2"), q("1/2")}));

  const std::vector<Rational> p3{0}, w3{q("0.4")};
  d = make_discrete(p3, w3);
  EXPECT_TRUE(d.is_point_mass());
  EXPECT_EQ(d.weights().front(), 1);
}

TEST(MakeDiscrete, RejectsBadInput) {
  const std::vector<Rational> none;
  const std::vector<Rational> one{1}, two{1, 2}, zero{0};
  EXPECT_THROW(make_discrete(none, none), InvalidInput);
  EXPECT_THROW(make_discrete(one, two), InvalidInput);
  EXPECT_THROW(make_discrete(one, zero), InvalidInput);
}

TEST(MakeDiscrete, Idempotent) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const auto d = oracle::random_discrete(rng, 1 + t % 6, 4, 9);
    EXPECT_EQ(make_discrete(d.points(), d.weights()), d);
  }
}

TEST(Quantile, Examples) {
  EXPECT_DOUBLE_EQ(quantile(uniform(0, 1), 0.25), 0.25);
  const std::vector<Rational> pts{0, 1}, w{q("1/2"), q("1/2")};
  const auto coin = make_discrete(pts, w);
  EXPECT_EQ(quantile(coin, q("1/2")), 0);
  EXPECT_DOUBLE_EQ(quantile(discrete(coin), 0.5), 0.0);
  EXPECT_NEAR(quantile(normal(0, 1), 0.975), 1.959964, 1e-5);
}

TEST(Quantile, NormalMatchesBoostOracle) {
  const boost::math::normal_distribution<double> ref(1.5, 2.0);
  const auto spec = normal(q("1.5"), 2);
  for (double p = 0.001; p < 1; p += 0.0173) {
    EXPECT_NEAR(quantile(spec, p), boost::math::quantile(ref, p), 1e-9 * (1 + std::abs(boost::math::quantile(ref, p))));
  }
}

TEST(Quantile, NondecreasingAndLeftContinuous) {
  const std::vector<Rational> pts{0, 1, 4}, w{q("1/4"), q("1/2"), q("1/4")};
  const std::vector<DistributionSpec> specs{uniform(2, 5), normal(0, 1), discrete(make_discrete(pts, w)),
                                            quantile_table({0, 0.5, 1}, {0, 1, 3})};
  for (const auto& s : specs) {
    double prev = -INFINITY;
    for (int k = 1; k <= 1000; ++k) {
      const double v = quantile(s, k / 1000.0);
      EXPECT_GE(v, prev) << kind_name(s);
      prev = v;
    }
  }
  // left-continuous: the value at a jump level belongs to the lower atom
  const auto d = make_discrete(pts, w);
  EXPECT_EQ(quantile(d, q("1/4")), 0);
  EXPECT_EQ(quantile(d, q("1/4") + q(1, 1000000)), 1);
  EXPECT_EQ(quantile(d, q("3/4")), 1);
}

TEST(Mean, Examples) {
  EXPECT_EQ(mean(uniform(0, 1)), q("1/2"));
  const std::vector<Rational> pts{0, 1, 2}, w{q("1/4"), q("1/2"), q("1/4")};
  EXPECT_EQ(mean(discrete(make_discrete(pts, w))), 1);
  std::vector<double> qs, xs;
  for (int k = 0; k <= 100; ++k) {
    qs.push_back(k / 100.0);
    xs.push_back(k / 100.0);
  }
  EXPECT_NEAR(to_double(mean(quantile_table(qs, xs))), 0.5, 1e-3);
}

TEST(Support, Examples) {
  auto s = essential_support(uniform(2, 5));
  EXPECT_TRUE(s.bounded());
  EXPECT_EQ(*s.lower, 2);
  EXPECT_EQ(*s.upper, 5);
  s = essential_support(normal(0, 1));
  EXPECT_FALSE(s.lower.has_value());
  EXPECT_FALSE(s.upper.has_value());
  const std::vector<Rational> pts{0, 3}, w{q("1/2"), q("1/2")};
  s = essential_support(discrete(make_discrete(pts, w)));
  EXPECT_TRUE(s.bounded());
  EXPECT_EQ(*s.lower, 0);
  EXPECT_EQ(*s.upper, 3);
}

TEST(Discretize, Examples) {
  const auto d = discretize(uniform(0, 1), 4);
  EXPECT_EQ(d.points(), (std::vector<Rational>{q("1/8"), q("3/8"), q("5/8"), q("7/8")}));
  for (const auto& w : d.weights()) EXPECT_EQ(w, q("1/4"));

  const auto c = discretize(discrete(point_mass(q("7/3"))), 3, ProbabilityWindow::upper_tail(q("1/2")));
  EXPECT_TRUE(c.is_point_mass());
  EXPECT_EQ(c.min(), q("7/3"));

  const auto tail = discretize(uniform(0, 1), 1000, ProbabilityWindow::upper_tail(q("0.9")));
  EXPECT_EQ(tail.size(), 1000u);
  EXPECT_NEAR(to_double(tail.mean()), 0.95, 1e-6);
}

TEST(Discretize, MeanErrorWithinMidpointBoundAndSupportContained) {
  const std::vector<DistributionSpec> specs{uniform(-1, 3), quantile_table({0, 0.3, 1}, {0, 2, 3}),
                                            monotone_density(0, 2, q("5/8"), Direction::Decreasing,
                                                             QuantileTable{{0, 0.5, 1}, {0, 0.25, 2}})};
  for (const auto& s : specs) {
    const auto sup = essential_support(s);
    const double width = sup.b() - sup.a();
    for (std::size_t n : {1u, 7u, 50u, 333u}) {
      const auto d = discretize(s, n);
      EXPECT_LE(std::abs(to_double(d.mean()) - to_double(mean(s))), width / (2.0 * n) + 1e-12) << kind_name(s);
      EXPECT_GE(to_double(d.min()), sup.a() - 1e-12);
      EXPECT_LE(to_double(d.max()), sup.b() + 1e-12);
    }
  }
}

TEST(Specs, ValidationRejectsBrokenParameters) {
  EXPECT_THROW(uniform(1, 1), InvalidInput);
  EXPECT_THROW(normal(0, -1), InvalidInput);
  EXPECT_THROW(monotone_density(0, 1, 2, Direction::Increasing), InvalidInput);
  EXPECT_THROW(quantile_table({0, 1}, {1, 0}), InvalidInput);
}
