#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "kmono/error.hpp"
#include "kmono/harness.hpp"
#include "kmono/io.hpp"
#include "kmono/shape_tests.hpp"

namespace kmono::cli {
namespace {

constexpr std::uint64_t kFallbackSeed = 20240517;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("KMONO_SEED")) {
    try {
      std::size_t used = 0;
      const auto value = std::stoull(env, &used);
      if (used == std::string(env).size()) return value;
    } catch (const std::exception&) {
    }
    throw InputError("KMONO_SEED must be a non-negative integer");
  }
  return kFallbackSeed;
}

struct TestFlags {
  std::string input;
  std::string format = "raw";
  int k = 1;
  std::string test = "min";
  std::string method = "m3";
  double alpha = 0.05;
  int draws = kDefaultDraws;
  std::optional<std::uint64_t> seed;
  std::optional<double> gamma, a_n, c;
  std::string out;

  void attach(CLI::App& cmd) {
    cmd.add_option("--input", input, "Count data file")->required();
    cmd.add_option("--format", format, "raw (one value per line) or freq (value,count)")
        ->check(CLI::IsMember({"raw", "freq"}));
    cmd.add_option("--k", k, "Degree: 1 = monotone, 2 = convex")->check(CLI::PositiveNumber);
    cmd.add_option("--test", test, "min or proj")->check(CLI::IsMember({"min", "proj"}));
    cmd.add_option("--method", method, "Non-knot selector for min tests")
        ->check(CLI::IsMember({"m1", "m2", "m3"}));
    cmd.add_option("--alpha", alpha, "Nominal level");
    cmd.add_option("--draws", draws, "Calibration draws B");
    cmd.add_option("--seed", seed, "Calibration seed (default: $KMONO_SEED or a fixed value)");
    cmd.add_option("--gamma", gamma, "Method 3 level (default 1/n)");
    cmd.add_option("--a-n", a_n, "Method 2 threshold factor (default n^(-1/|S_k|))");
    cmd.add_option("--c", c, "Method 2 constant (default 1)");
    cmd.add_option("--out", out, "Output file (default: standard output)");
  }

  TestConfig config() const {
    TestConfig cfg;
    cfg.k = k;
    cfg.kind = parse_test_kind(test);
    cfg.method = parse_method(method);
    cfg.alpha = alpha;
    cfg.draws = draws;
    cfg.seed = seed ? *seed : default_seed();
    cfg.overrides.gamma = gamma;
    cfg.overrides.a_n = a_n;
    cfg.overrides.c = c;
    return cfg;
  }
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw InputError("cannot write '" + path + "'");
  file << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_test_command(const TestFlags& f, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const InputFormat format = parse_input_format(f.format);
  const CountSample sample = ingest(f.input, format);
  const TestResult result = run_test(sample, f.config());
  Report report = make_report(sample, result, f.input, format);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string json = report_to_json(report);
  emit(f.out, json, out);
  if (!f.out.empty())
    out << (result.reject ? "reject" : "do not reject") << " H0 (" << result.null_hypothesis
        << "): statistic " << round_significant(result.statistic) << ", critical value "
        << round_significant(result.critical_value) << ", p-value "
        << round_significant(result.p_value) << "\n";
  return kExitOk;
}

int run_draws_command(const TestFlags& f, std::ostream& out) {
  const CountSample sample = ingest(f.input, parse_input_format(f.format));
  std::ostringstream csv;
  write_draws_csv(csv, calibration_draws(sample, f.config()));
  emit(f.out, csv.str(), out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tests for k-monotone probability mass functions of count data", "kmono"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  TestFlags test_flags;
  auto* test_cmd = app.add_subcommand("test", "Run a shape test on a count sample");
  test_flags.attach(*test_cmd);

  TestFlags draw_flags;
  auto* draws_cmd = app.add_subcommand("draws", "Export the calibration draws as CSV");
  draw_flags.attach(*draws_cmd);

  std::string pmf_input, pmf_format = "raw", pmf_out;
  int pmf_k = 1;
  auto* pmf_cmd = app.add_subcommand("pmf", "Print the empirical p.m.f. and its k-th differences");
  pmf_cmd->add_option("--input", pmf_input, "Count data file")->required();
  pmf_cmd->add_option("--format", pmf_format, "raw or freq")->check(CLI::IsMember({"raw", "freq"}));
  pmf_cmd->add_option("--k", pmf_k, "Degree of the differences")->check(CLI::PositiveNumber);
  pmf_cmd->add_option("--out", pmf_out, "Output file (default: standard output)");

  std::string study_config, study_out, study_manifest;
  std::optional<unsigned> study_workers;
  auto* study_cmd = app.add_subcommand("study", "Run a Monte Carlo rejection-rate study");
  study_cmd->add_option("--config", study_config, "Study configuration (JSON)")->required();
  study_cmd->add_option("--out", study_out, "Rejection table (CSV; default: standard output)");
  study_cmd->add_option("--manifest", study_manifest, "Run manifest (JSON)");
  study_cmd->add_option("--workers", study_workers, "Worker threads (0 = all cores)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitInput;
  }

  try {
    if (test_cmd->parsed()) return run_test_command(test_flags, out);
    if (draws_cmd->parsed()) return run_draws_command(draw_flags, out);
    if (pmf_cmd->parsed()) {
      const CountSample sample = ingest(pmf_input, parse_input_format(pmf_format));
      std::ostringstream table;
      write_pmf_table(table, sample, pmf_k);
      emit(pmf_out, table.str(), out);
      return kExitOk;
    }
    StudyConfig cfg = parse_study_config(read_file(study_config));
    if (study_workers) cfg.workers = *study_workers;
    const auto start = std::chrono::steady_clock::now();
    const auto rows = run_study(cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream csv;
    write_study_csv(csv, rows);
    emit(study_out, csv.str(), out);
    if (!study_manifest.empty()) emit(study_manifest, study_manifest_json(cfg, rows, seconds), out);
    const bool failed = std::any_of(rows.begin(), rows.end(), [](const StudyRow& r) { return r.failures > 0; });
    if (failed) {
      err << "warning: some replications failed; see the failures column\n";
      return kExitNumerical;
    }
    return kExitOk;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace kmono::cli
