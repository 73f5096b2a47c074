#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "kmono/harness.hpp"
#include "kmono/pmf.hpp"
#include "kmono/shape_tests.hpp"

namespace kmono {

/// raw: one non-negative integer per line.
/// freq: "value,count" per line; extra columns are ignored and an optional
/// first line starting with "value" is treated as a header.
/// In both formats blank lines and lines starting with '#' are skipped.
enum class InputFormat { Raw, Freq };

std::string_view to_string(InputFormat f) noexcept;
InputFormat parse_input_format(std::string_view text);

/// Errors name the offending line ("line 3: ...") and are InputError.
CountSample read_counts(std::istream& in, InputFormat format);
CountSample ingest(const std::string& path, InputFormat format);

/// Rounds to 6 significant digits, the precision of every report number.
double round_significant(double x, int digits = 6);

struct Report {
  std::string tool_version;
  std::string input_path;
  InputFormat input_format = InputFormat::Raw;
  std::vector<double> p_hat;
  /// Test outcome with every real rounded to 6 significant digits.
  TestResult result;
  /// Ignored by equality: wall-clock data differs between identical runs.
  std::string generated_at;
  double wall_seconds = 0.0;
};

Report make_report(const CountSample& sample, const TestResult& result, std::string input_path,
                   InputFormat format);

/// Pretty-printed JSON; parse_report(report_to_json(r)) reproduces r.
std::string report_to_json(const Report& report);
Report parse_report(std::string_view json);

/// Equality of everything except the timing fields.
bool same_outcome(const Report& a, const Report& b);

/// Study configuration file:
///   {"replications": 1000, "draws": 1000, "alpha": 0.05, "seed": 1, "workers": 0,
///    "profile": "full" | "quick",
///    "scenarios": [{"model": "tpois:0:4:1.0", "n": [100, 1000], "k": 1,
///                   "tests": ["i", "ii", "iii", "iv"]}]}
/// A "quick" profile sets R = 200 and B = 500 unless given explicitly.
StudyConfig parse_study_config(std::string_view json);

/// Rejection percentages pivoted like the simulation tables: one line per
/// (model, n, k) and one column per test, followed by the standard errors.
void write_study_csv(std::ostream& out, const std::vector<StudyRow>& rows);

/// Run manifest: configuration, seeds, tool version, per-row wall times.
std::string study_manifest_json(const StudyConfig& cfg, const std::vector<StudyRow>& rows,
                                double total_seconds);

/// Single-column CSV with header "draw".
void write_draws_csv(std::ostream& out, const DrawSet& draws);

/// Frequency table of the sample with p_hat and nabla^k p_hat columns; it is a
/// valid freq input, so re-ingesting it reproduces the empirical p.m.f.
void write_pmf_table(std::ostream& out, const CountSample& sample, int k);

std::string tool_version();

}  // namespace kmono
