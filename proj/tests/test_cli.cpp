#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "bentcable/io.hpp"
#include "cli.hpp"

using bentcable::cli::run_cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) { return std::string(BENTCABLE_TEST_TMP) + "/cli_" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

// Replicated two-phase data written through the simulate subcommand.
std::string simulated_csv() {
  static const std::string path = [] {
    const std::string p = tmp("sim.csv");
    const auto r = call({"simulate", "--family", "BC", "--params",
                         "alpha=0.5,beta=-0.4,delta=-1,tau=0,scale=0.4", "--x-range", "-1.5,1.5",
                         "--n", "14", "--replicates", "2", "--subunits", "0", "--sigma", "0.05",
                         "--seed", "9", "--out", p});
    EXPECT_EQ(r.code, 0) << r.err;
    return p;
  }();
  return path;
}

}  // namespace

TEST(Cli, SimulateRoundTripsThroughCsvReader) {
  const auto path = simulated_csv();
  const auto again = call({"simulate", "--family", "BC", "--params",
                           "alpha=0.5,beta=-0.4,delta=-1,tau=0,scale=0.4", "--x-range", "-1.5,1.5",
                           "--n", "14", "--replicates", "2", "--subunits", "0", "--sigma", "0.05",
                           "--seed", "9"});
  ASSERT_EQ(again.code, 0);
  std::istringstream from_stdout(again.out);
  const auto a = bentcable::read_csv(path);
  const auto b = bentcable::read_csv(from_stdout);
  EXPECT_EQ(a.size(), 28);
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  EXPECT_EQ(a.replicate_groups().size(), 14u);
}

TEST(Cli, FitIsByteIdenticalUnderFixedSeed) {
  const auto input = simulated_csv();
  const std::vector<std::string> base = {"fit", "--input", input, "--family", "BC",
                                         "--generations", "150", "--seed", "4"};
  auto first = base;
  first.insert(first.end(), {"--out", tmp("fit1.json"), "--plot-data", tmp("plot1.csv")});
  auto second = base;
  second.insert(second.end(), {"--out", tmp("fit2.json"), "--plot-data", tmp("plot2.csv")});
  ASSERT_EQ(call(first).code, 0);
  ASSERT_EQ(call(second).code, 0);
  const std::string a = slurp(tmp("fit1.json"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(tmp("fit2.json")));

  const auto doc = nlohmann::json::parse(a);
  EXPECT_EQ(doc["config"]["seed"], 4);
  EXPECT_EQ(doc["tool"]["name"], "bentcable");
  EXPECT_TRUE(doc["tool"].contains("version"));
  const auto& fit = doc["fits"][0];
  EXPECT_EQ(fit["family"], "BC");
  EXPECT_EQ(fit["curve"].size(), 400u);
  EXPECT_EQ(fit["residuals"].size(), 28u);
  EXPECT_TRUE(fit["lack_of_fit"].contains("p_value"));
  EXPECT_EQ(fit["transition_zones"].size(), 1u);
  EXPECT_EQ(slurp(tmp("plot1.csv")).rfind("family,series,x,value\n", 0), 0u);
}

TEST(Cli, CompareSingleFamilyHasUnitWeight) {
  const auto r = call({"compare", "--input", simulated_csv(), "--family", "N-BC", "--generations",
                       "100", "--out", tmp("cmp1.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(slurp(tmp("cmp1.json")));
  ASSERT_EQ(doc["table"].size(), 1u);
  EXPECT_EQ(doc["table"][0]["relative_likelihood"], 1.0);
  EXPECT_FALSE(doc.contains("lrt"));
}

TEST(Cli, CompareAddsAsymmetryTest) {
  const auto r = call({"compare", "--input", simulated_csv(), "--family", "N-BC,SN-BC",
                       "--generations", "100", "--out", tmp("cmp2.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(slurp(tmp("cmp2.json")));
  ASSERT_TRUE(doc.contains("lrt"));
  EXPECT_EQ(doc["lrt"]["df"], 1);
  EXPECT_GE(doc["lrt"]["statistic"].get<double>(), 0.0);
  EXPECT_NE(r.out.find("LRT SN-BC vs N-BC"), std::string::npos);
}

TEST(Cli, SurfaceGrid) {
  const auto r = call({"surface", "--input", simulated_csv(), "--family", "BC", "--generations",
                       "100", "--grid", "6x5", "--out", tmp("surf.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(slurp(tmp("surf.json")));
  const auto& s = doc["surfaces"][0];
  EXPECT_EQ(s["deviance"].size(), 6u);
  EXPECT_EQ(s["deviance"][0].size(), 5u);
  EXPECT_NEAR(s["threshold"].get<double>(), -5.9915, 1e-4);
}

TEST(Cli, InputErrorsExitTwo) {
  write(tmp("three.csv"), "x,y\n0,1\n1,2\n2,1\n");
  const auto few = call({"fit", "--input", tmp("three.csv"), "--family", "BC"});
  EXPECT_EQ(few.code, 2);
  EXPECT_NE(few.err.find("insufficient"), std::string::npos) << few.err;

  write(tmp("bad.csv"), "x,y\n0,1\n1,oops\n");
  const auto bad = call({"fit", "--input", tmp("bad.csv"), "--family", "BC"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("line 3"), std::string::npos) << bad.err;

  EXPECT_EQ(call({"fit", "--input", tmp("missing.csv"), "--family", "BC"}).code, 2);
  EXPECT_EQ(call({"fit", "--input", simulated_csv(), "--family", "Spline"}).code, 2);
  EXPECT_EQ(call({"fit", "--input", simulated_csv()}).code, 2);
  EXPECT_EQ(call({"fit", "--bogus"}).code, 2);
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"simulate", "--family", "SMM:Cauchy"}).code, 2);
  EXPECT_EQ(call({"fit", "--input", simulated_csv(), "--family", "BC", "--grid", "7"}).code, 2);
}

TEST(Cli, SingularFitExitsThree) {
  // Two distinct x values leave every bent column collinear with the line.
  write(tmp("flat.csv"), "x,y\n0,1\n0,2\n0,1\n0,3\n0,2\n0,1\n1,1\n1,2\n");
  const auto r = call({"fit", "--input", tmp("flat.csv"), "--family", "BC", "--generations", "10"});
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_NE(r.err.find("singular"), std::string::npos);
}

TEST(Cli, VerifyFamilyReportsExpectedFailure) {
  const auto r = call({"verify", "--family", "Hyp", "--out", tmp("verify.json")});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("EXPECTED-FAIL"), std::string::npos);
  const auto doc = nlohmann::json::parse(slurp(tmp("verify.json")));
  bool found = false;
  for (const auto& c : doc["checks"]) {
    if (c["name"] == "(iii)") {
      EXPECT_EQ(c["status"], "EXPECTED-FAIL");
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(call({"verify", "--family", "Cauchy"}).code, 2);
}

TEST(Cli, VerifyDefaultRunPasses) {
  const auto r = call({"verify", "--draws", "100000"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find(" 0 unexpected"), std::string::npos);
}
