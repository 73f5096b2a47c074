#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "kmono/distributions.hpp"
#include "kmono/io.hpp"

namespace kmono {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("kmono_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& body) const {
    const auto path = dir_ / name;
    std::ofstream(path) << body;
    return path.string();
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string monotone_sample() const {
    const CountSample s = sample_iid(DistributionSpec::parse("tpois:0:4:1"), 1000, 2024);
    std::ostringstream table;
    write_pmf_table(table, s, 1);
    return write("monotone.csv", table.str());
  }

  fs::path dir_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST_F(CliTest, MonotoneSampleIsNotRejectedByMethodThree) {
  const CliRun r = run({"test", "--input", monotone_sample(), "--format", "freq", "--k", "1", "--test", "min",
                     "--method", "m3", "--alpha", "0.05", "--seed", "1"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const Report rep = parse_report(r.out);
  EXPECT_FALSE(rep.result.reject);
  EXPECT_EQ(rep.result.null_hypothesis, "rho_k = 0");
  EXPECT_EQ(rep.result.n, 1000);
}

TEST_F(CliTest, ConvexSampleHasZeroProjectionStatistic) {
  const std::string in = write("convex.csv", "0,40\n1,20\n2,10\n3,10\n4,20\n");
  const CliRun r = run({"test", "--input", in, "--format", "freq", "--k", "2", "--test", "proj"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const Report rep = parse_report(r.out);
  EXPECT_EQ(rep.result.statistic, 0.0);
  EXPECT_FALSE(rep.result.reject);
}

TEST_F(CliTest, MissingInputIsAUsageError) {
  const CliRun r = run({"test", "--k", "1"});
  EXPECT_EQ(r.code, cli::kExitInput);
  EXPECT_NE(r.err.find("--input"), std::string::npos);
}

TEST_F(CliTest, InputErrorsExitWithTwo) {
  const std::string bad = write("bad.csv", "0,1\nx,1\n");
  const CliRun r = run({"test", "--input", bad, "--format", "freq"});
  EXPECT_EQ(r.code, cli::kExitInput);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  EXPECT_EQ(run({"test", "--input", path("absent.txt")}).code, cli::kExitInput);
  EXPECT_EQ(run({"test", "--input", bad, "--method", "m9"}).code, cli::kExitInput);
  EXPECT_EQ(run({"test", "--input", monotone_sample(), "--format", "freq", "--k", "3", "--test", "proj"}).code,
            cli::kExitInput);
  EXPECT_EQ(run({"test", "--input", monotone_sample(), "--format", "freq", "--alpha", "2"}).code, cli::kExitInput);
  EXPECT_EQ(run({}).code, cli::kExitInput);
}

TEST_F(CliTest, ReportsAreIdenticalModuloTiming) {
  const std::string in = monotone_sample();
  const std::string a = path("a.json"), b = path("b.json");
  for (const auto& out : {a, b}) {
    const CliRun r = run({"test", "--input", in, "--format", "freq", "--test", "proj", "--seed", "77", "--out", out});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_NE(r.out.find("H0 (monotone)"), std::string::npos);
  }
  EXPECT_TRUE(same_outcome(parse_report(slurp(a)), parse_report(slurp(b))));
  Report x = parse_report(slurp(a)), y = parse_report(slurp(b));
  x.generated_at = y.generated_at;
  x.wall_seconds = y.wall_seconds;
  EXPECT_EQ(report_to_json(x), report_to_json(y));
}

TEST_F(CliTest, EnvironmentSeedIsTheDefault) {
  const std::string in = monotone_sample();
  ::setenv("KMONO_SEED", "4242", 1);
  const CliRun env = run({"test", "--input", in, "--format", "freq"});
  ::setenv("KMONO_SEED", "not-a-seed", 1);
  const CliRun bad = run({"test", "--input", in, "--format", "freq"});
  ::unsetenv("KMONO_SEED");
  const CliRun flag = run({"test", "--input", in, "--format", "freq", "--seed", "4242"});
  ASSERT_EQ(env.code, cli::kExitOk);
  EXPECT_EQ(parse_report(env.out).result.seed, 4242u);
  EXPECT_TRUE(same_outcome(parse_report(env.out), parse_report(flag.out)));
  EXPECT_EQ(bad.code, cli::kExitInput);
}

TEST_F(CliTest, PmfOutputReingestsToTheSamePmf) {
  const std::string raw = write("raw.txt", "2\n2\n5\n3\n");
  const CliRun r = run({"pmf", "--input", raw, "--k", "2", "--out", path("table.csv")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(build_empirical_pmf(ingest(path("table.csv"), InputFormat::Freq)).probs(),
            build_empirical_pmf(ingest(raw, InputFormat::Raw)).probs());
  EXPECT_EQ(slurp(path("table.csv")).substr(0, 24), "value,count,p_hat,nabla2");
}

TEST_F(CliTest, DrawsMatchCalibration) {
  const std::string in = monotone_sample();
  const CliRun r = run({"draws", "--input", in, "--format", "freq", "--draws", "25", "--seed", "3"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  TestConfig cfg;
  cfg.draws = 25;
  cfg.seed = 3;
  std::ostringstream expected;
  write_draws_csv(expected, calibration_draws(ingest(in, InputFormat::Freq), cfg));
  EXPECT_EQ(r.out, expected.str());
}

TEST_F(CliTest, StudyWritesTableAndManifest) {
  const std::string cfg = write("study.json", R"({"replications": 20, "draws": 100, "seed": 3,
      "scenarios": [{"model": "tpois:0:4:1", "n": 200, "k": 1, "tests": ["i", "iv"]}]})");
  const CliRun r = run({"study", "--config", cfg, "--out", path("t.csv"), "--manifest", path("m.json"), "--workers", "2"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const std::string table = slurp(path("t.csv"));
  EXPECT_EQ(table.substr(0, table.find('\n')), "model,n,k,i,ii,iii,iv,se_i,se_ii,se_iii,se_iv,failures");
  EXPECT_NE(slurp(path("m.json")).find("\"seed\""), std::string::npos);
}

TEST_F(CliTest, FailedReplicationsExitWithThree) {
  // Two support points leave no second difference to test.
  const std::string cfg = write("study.json", R"({"replications": 3, "draws": 10,
      "scenarios": [{"model": "weights:0:1,1", "n": 20, "k": 2, "tests": ["iii"]}]})");
  const CliRun r = run({"study", "--config", cfg});
  EXPECT_EQ(r.code, cli::kExitNumerical);
  EXPECT_NE(r.out.find(",3\n"), std::string::npos);
}

}  // namespace
}  // namespace kmono
