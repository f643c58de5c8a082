#include <gtest/gtest.h>

#include <sstream>

#include "unfriendly/cli.hpp"

using namespace unfriendly;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json parsed(const Result& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, DistOracleExample) {
  auto r = run({"dist", "--family", "X", "--n", "3", "--engine", "oracle"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parsed(r).dump(), R"({"2":"2/9","3":"7/9"})");
  for (const char* engine : {"recurrence", "series"})
    EXPECT_EQ(run({"dist", "--family", "X", "--n", "3", "--engine", engine}).out, r.out);
  auto csv = run({"dist", "--family", "X", "--n", "3", "--format", "csv"});
  EXPECT_EQ(csv.out, "k,p\n2,2/9\n3,7/9\n");
}

TEST(Cli, DistSpectralIsNumeric) {
  auto r = run({"dist", "--family", "X", "--n", "3", "--engine", "spectral", "--k-range", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = parsed(r);
  EXPECT_NEAR(std::stod(j["2"].get<std::string>()), 2.0 / 9, 1e-6);
  EXPECT_NEAR(std::stod(j["3"].get<std::string>()), 7.0 / 9, 1e-6);
}

TEST(Cli, Constants) {
  auto r = run({"constants", "--digits", "20"});
  ASSERT_EQ(r.code, 0);
  auto j = parsed(r);
  EXPECT_EQ(j["digits"], 20);
  EXPECT_EQ(j["c1"].get<std::string>().rfind("0.33502270629484", 0), 0u);
  EXPECT_EQ(j["jamming_2row"].get<std::string>().substr(0, 8), "0.408030");
}

TEST(Cli, VerifySuites) {
  EXPECT_EQ(run({"verify", "--suite", "dominance", "--nmax", "12"}).code, 0);
  auto r = run({"verify", "--nmax", "12"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(parsed(r)["passed"].get<bool>());
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"dist", "--bogus"}).code, 2);
  EXPECT_EQ(run({"dist", "--family", "Q", "--n", "3"}).code, 2);
  EXPECT_EQ(run({"dist", "--n", "-1"}).code, 2);
  EXPECT_EQ(run({"constants", "--digits", "5"}).code, 2);
  EXPECT_EQ(run({"spectral", "--t", "abc"}).code, 2);
  EXPECT_EQ(run({"dist", "--family", "CUSTOM"}).code, 2);
}

TEST(Cli, ComputationFailures) {
  auto r = run({"dist", "--family", "X", "--n", "13", "--engine", "oracle"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("exact oracle limit exceeded"), std::string::npos);
  // real t in (0,1) puts k != 0 on a cut; the upper side is taken, so this works
  EXPECT_EQ(run({"spectral", "--t", "0.5,0", "--k-range", "2"}).code, 0);
  EXPECT_EQ(run({"spectral", "--t", "-1,0", "--k-range", "2"}).code, 1);
}

TEST(Cli, DeterministicOutput) {
  std::vector<std::string> args{"simulate", "--family", "Y", "--n", "4", "--trials", "2000", "--seed", "9"};
  auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto j = parsed(a);
  EXPECT_EQ(j["trials"], 2000);
  EXPECT_GT(std::stod(j["chi_square"]["p_value"].get<std::string>()), 1e-3);
}

TEST(Cli, OtherSubcommands) {
  auto m = run({"moments", "--family", "X", "--n", "1"});
  ASSERT_EQ(m.code, 0);
  EXPECT_EQ(parsed(m)["kappa3"]["exact"], "0/1");

  auto s = run({"series", "--family", "Y", "--n", "2", "--format", "csv"});
  EXPECT_EQ(s.out.substr(0, 2), "n,");
  EXPECT_EQ(parsed(run({"series", "--family", "X", "--n", "2"}))["order"], 2);

  auto sp = parsed(run({"spectral", "--t", "0,1", "--k-range", "3", "--n", "20"}));
  EXPECT_EQ(sp["branches"].size(), 7u);
  EXPECT_LT(std::stod(sp["xnt"]["difference"].get<std::string>()), 1e-8);

  auto d = parsed(run({"dominance", "--nmax", "4"}));
  EXPECT_TRUE(d["all_hold"].get<bool>());
  EXPECT_EQ(d["counterexamples"]["grids"]["G1"]["law"].dump(), R"({"2":"7/15","3":"8/15"})");

  auto h = parsed(run({"hardcore", "--family", "Y", "--n", "5", "--digits", "12"}));
  EXPECT_EQ(h["arrangements"], "8");
  EXPECT_EQ(h["constants"]["two_row_density"].get<std::string>().substr(0, 7), "0.36180");
}
