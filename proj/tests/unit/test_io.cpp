#include <gtest/gtest.h>

#include "mix/error.hpp"
#include "mix/io.hpp"
#include "mix/lpcert.hpp"
#include "oracles.hpp"

using namespace mix;
using oracle::q;

TEST(SpecText, Examples) {
  auto f = parse_spec_text(R"({"type":"uniform","a":0,"b":1})");
  ASSERT_EQ(f.specs.size(), 1u);
  EXPECT_EQ(f.specs[0], uniform(0, 1));
  EXPECT_TRUE(f.rational);

  try {
    parse_spec_text(R"({"type":"discrete","points":[0,1],"weights":[0.5,0.48]})");
    FAIL() << "expected a schema error";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("weights must sum to 1"), std::string::npos);
  }

  f = parse_spec_text(R"([{"type":"discrete","points":["1/3",2],"weights":["1/4","3/4"]},
                          {"type":"normal","mu":0,"sigma":1.5}])");
  EXPECT_EQ(f.specs.size(), 2u);
  EXPECT_FALSE(f.rational);
}

TEST(SpecText, WrapperAndExactDecimals) {
  const auto f = parse_spec_text(R"({"marginals":[{"type":"uniform","a":"0.1","b":{"num":7,"den":3}}],"n":4})");
  EXPECT_EQ(f.n, 4u);
  EXPECT_EQ(std::get<Uniform>(f.specs[0].law).a, q(1, 10));
  EXPECT_EQ(std::get<Uniform>(f.specs[0].law).b, q(7, 3));
}

TEST(SpecText, Rejections) {
  EXPECT_THROW(parse_spec_text(R"({"type":"uniform","a":0,"a":1,"b":2})"), SchemaError);
  EXPECT_THROW(parse_spec_text(R"({"type":"uniform","a":0,"b":1,"c":2})"), SchemaError);
  EXPECT_THROW(parse_spec_text(R"({"type":"gamma"})"), SchemaError);
  EXPECT_THROW(parse_spec_text(R"({"type":"uniform","a":0)"), SchemaError);
  EXPECT_THROW(parse_spec_text(R"({"type":"uniform","a":2,"b":1})"), SchemaError);
}

TEST(SpecText, RoundTrip) {
  const std::vector<DistributionSpec> specs{
      uniform(q("-1/3"), 2), normal(1, q("1/2")), concave_density(0, 3), bounded_below_density(0, 1, q("1/2")),
      monotone_density(0, 1, q("1/4"), Direction::Decreasing), elliptical(0, 2, "t4"),
      quantile_table({0, 0.5, 1}, {0, 0.25, 1}), discrete(make_discrete(std::vector<Rational>{0, q("5/7")},
                                                                       std::vector<Rational>{q("1/3"), q("2/3")}))};
  Json arr = Json::array();
  for (const auto& s : specs) arr.push_back(to_json(s));
  const auto back = parse_spec_text(arr.dump());
  EXPECT_EQ(back.specs, specs);
}

TEST(Certificates, RoundTrip) {
  const std::vector<Rational> pts{0, 1}, w{q("2/3"), q("1/3")};
  const std::vector<DiscreteDistribution> third(2, make_discrete(pts, w));
  const auto v = jm_lp_decide(third);
  const auto back = certificate_from_json(parse_json_strict(to_json(v).dump()));
  EXPECT_EQ(to_json(back).dump(), to_json(v.certificate).dump());

  const std::vector<Rational> a{0, 1, 2};
  ArrangementCertificate arr{{a, a, a}, Arrangement{{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}}, 3};
  const Certificate c = arr;
  EXPECT_EQ(to_json(certificate_from_json(to_json(c))).dump(), to_json(c).dump());
}

TEST(MatrixCsv, HeaderCommentsAndExactValues) {
  const auto m = parse_matrix_csv("a,b\n# comment\n0.1,1/3\n2,3\n");
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 2u);
  EXPECT_EQ(m(0, 0), q(1, 10));
  EXPECT_EQ(m(0, 1), q(1, 3));
  EXPECT_THROW(parse_matrix_csv("1,2\n3\n"), SchemaError);
}

TEST(FormatDouble, RoundTrips) {
  for (double x : {0.1, 1.0 / 3, 1e-300, 123456789.125, -2.5}) EXPECT_EQ(std::stod(format_double(x)), x);
}
