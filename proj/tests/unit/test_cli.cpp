#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"

using mix::Json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = mix::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("mix_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, CheckUniformPair) {
  const auto path = write("u.json", R"({"type":"uniform","a":0,"b":1})");
  const auto r = run({"check", path, "--n", "2", "--verify"});
  EXPECT_EQ(r.code, mix::cli::kMixable);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["result"]["status"], "mixable");
  EXPECT_EQ(j["verification"]["ok"], true);
}

TEST_F(CliTest, DecideLpBernoulliThird) {
  const auto path = write("b.json", R"([{"type":"discrete","points":[0,1],"weights":["2/3","1/3"]},
                                         {"type":"discrete","points":[0,1],"weights":["2/3","1/3"]}])");
  const auto r = run({"decide-lp", path, "--verify"});
  EXPECT_EQ(r.code, mix::cli::kNotMixable);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["result"]["certificate"]["kind"], "dual");
  EXPECT_EQ(j["verification"]["ok"], true);
}

TEST_F(CliTest, SolveThreeByThree) {
  const auto path = write("m.csv", "0,1,2\n0,1,2\n0,1,2\n");
  const auto r = run({"solve", path, "--verify"});
  EXPECT_EQ(r.code, 0);
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["result"]["exact_mix"], true);
  EXPECT_EQ(j["result"]["T"]["num"], 3);
}

TEST_F(CliTest, ExitCodes) {
  const auto m = write("m.csv", "0,1,2,3\n0,1,2,3\n0,1,2,3\n");
  EXPECT_EQ(run({"oracle", m, "--budget", "10"}).code, mix::cli::kBudget);
  EXPECT_EQ(run({"bogus"}).code, mix::cli::kUsage);
  EXPECT_EQ(run({}).code, mix::cli::kUsage);
  EXPECT_EQ(run({"check"}).code, mix::cli::kUsage);
  EXPECT_EQ(run({"var-bounds", m, "--p", "1.5"}).code, mix::cli::kUsage);
  EXPECT_EQ(run({"check", (dir_ / "missing.json").string()}).code, mix::cli::kInput);
  EXPECT_EQ(run({"check", write("bad.json", "{\"type\":")}).code, mix::cli::kInput);
  EXPECT_EQ(run({"check", write("w.json", R"({"type":"discrete","points":[0,1],"weights":[0.5,0.48]})")}).code,
            mix::cli::kInput);
  EXPECT_EQ(run({"solve", write("r.csv", "1,2\n3\n")}).code, mix::cli::kInput);
  EXPECT_EQ(run({"--help"}).code, 0);
  const auto u = write("u.json", R"({"type":"concave","a":0,"b":1})");
  EXPECT_EQ(run({"check", u, "--n", "2"}).code, mix::cli::kUnknown);
}

TEST_F(CliTest, EnvironmentBudget) {
  const auto m = write("m.csv", "0,1,2,3\n0,1,2,3\n0,1,2,3\n");
  ::setenv("MIX_BUDGET", "10", 1);
  const int limited = run({"oracle", m}).code;
  ::setenv("MIX_BUDGET", "1000", 1);
  const int enough = run({"oracle", m}).code;
  const int flag = run({"oracle", m, "--budget", "10"}).code;
  ::unsetenv("MIX_BUDGET");
  EXPECT_EQ(limited, mix::cli::kBudget);
  EXPECT_EQ(enough, 0);
  EXPECT_EQ(flag, mix::cli::kBudget);
}

TEST_F(CliTest, ReportsAreByteIdenticalAndDigestTracksInput) {
  const auto path = write("m.csv", "0,0,3\n1,1,1\n0,2,2\n5,1,0\n");
  const auto a = run({"solve", path, "--seed", "3"});
  const auto b = run({"solve", path, "--seed", "3"});
  EXPECT_EQ(a.out, b.out);
  const auto before = Json::parse(a.out)["input_sha256"];
  write("m.csv", "0,0,3\n1,1,1\n0,2,2\n5,1,1\n");
  const auto c = run({"solve", path, "--seed", "3"});
  EXPECT_NE(Json::parse(c.out)["input_sha256"], before);
  // identical bytes under another name give the same digest
  const auto copy = write("copy.csv", "0,0,3\n1,1,1\n0,2,2\n5,1,0\n");
  EXPECT_EQ(Json::parse(run({"solve", copy, "--seed", "3"}).out)["input_sha256"], before);

  const auto spec = write("v.json", R"([{"type":"uniform","a":0,"b":1},{"type":"uniform","a":0,"b":2}])");
  EXPECT_EQ(run({"var-bounds", spec, "--p", "0.9", "--N", "200"}).out,
            run({"var-bounds", spec, "--p", "0.9", "--N", "200"}).out);
}

TEST_F(CliTest, EveryCertificateRevalidates) {
  const auto d = write("d.json", R"({"type":"discrete","points":[0,1,2],"weights":["1/4","1/2","1/4"]})");
  const auto dec = run({"decompose", d, "--n", "2", "--verify"});
  EXPECT_EQ(dec.code, 0);
  const auto cert = write("cert.json", dec.out);
  const auto out = (dir_ / "s.csv").string();
  const auto s = run({"sample", cert, "--count", "50", "--out", out, "--verify"});
  EXPECT_EQ(s.code, 0);
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "x1,x2");
  EXPECT_FALSE(fs::exists(out + ".tmp"));

  const auto g = run({"gaussian-mix", "--sigmas", "1,2,3", "--mus", "0,1,-1", "--verify"});
  EXPECT_EQ(g.code, 0);
  EXPECT_EQ(run({"sample", write("g.json", g.out), "--count", "100", "--verify"}).code, 0);
  EXPECT_EQ(run({"gaussian-mix", "--sigmas", "1,1,3"}).code, mix::cli::kNotMixable);

  const auto three = write("t.json", R"([{"type":"discrete","points":[0,1,2],"weights":["1/3","1/3","1/3"]},
                                        {"type":"discrete","points":[0,1,2],"weights":["1/3","1/3","1/3"]},
                                        {"type":"discrete","points":[0,1,2],"weights":["1/3","1/3","1/3"]}])");
  const auto lp = run({"decide-lp", three, "--verify"});
  EXPECT_EQ(lp.code, 0);
  EXPECT_EQ(run({"sample", write("lp.json", lp.out), "--count", "20", "--verify"}).code, 0);
  EXPECT_EQ(run({"check", three, "--verify"}).code, 0);

  const auto v = write("v.json", R"([{"type":"uniform","a":0,"b":1},{"type":"uniform","a":0,"b":1}])");
  EXPECT_EQ(run({"var-bounds", v, "--p", "1/2", "--N", "500", "--verify"}).code, 0);
}

TEST_F(CliTest, TamperedCertificateIsRejected) {
  const auto g = run({"gaussian-mix", "--sigmas", "1,2,3"});
  auto j = Json::parse(g.out);
  j["result"]["certificate"]["corr"][0][1] = 0.0;
  j["result"]["certificate"]["corr"][1][0] = 0.0;
  const auto r = run({"sample", write("bad.json", j.dump()), "--count", "10"});
  EXPECT_EQ(r.code, mix::cli::kVerification);
}
