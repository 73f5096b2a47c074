#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "kmono/knots.hpp"
#include "kmono/limit_sampler.hpp"
#include "kmono/pmf.hpp"

namespace kmono {

/// Min: sqrt(n) * rho_k of the empirical p.m.f., lower tail.
/// Projection: sqrt(n) * || projection(p_n) - p_n ||_2, upper tail (k in {1, 2}).
enum class TestKind { Min, Projection };

std::string_view to_string(TestKind kind) noexcept;
/// Accepts "min" and "proj"; throws InputError otherwise.
TestKind parse_test_kind(std::string_view text);

struct TestConfig {
  int k = 1;
  TestKind kind = TestKind::Min;
  /// Non-knot selector for min tests. Projection tests always estimate knots
  /// with Method 3 (no fallback) and ignore this field.
  Method method = Method::M3;
  double alpha = 0.05;
  int draws = kDefaultDraws;
  std::uint64_t seed = 0;
  SelectionOverrides overrides;
};

struct TestResult {
  double statistic = 0.0;
  double critical_value = 0.0;
  double p_value = 1.0;
  bool reject = false;
  Tail tail = Tail::Lower;
  /// "rho_k >= 0" (M1, M2), "rho_k = 0" (M3), "monotone" or "convex".
  std::string null_hypothesis;

  int k = 1;
  TestKind kind = TestKind::Min;
  double alpha = 0.05;
  int draws = kDefaultDraws;
  std::uint64_t seed = 0;

  /// Present for min tests only.
  std::optional<SelectionOutcome> selection;
  /// S_k minus the non-knot set used for calibration.
  IndexSet knot_estimate;
  /// Projection tests: Method 3 kept no index, so every point is a knot and
  /// the limit law is the point mass at zero.
  bool degenerate_calibration = false;

  std::int64_t n = 0;
  std::int64_t support_min = 0;
  std::int64_t support_max = 0;
};

/// Objective values at or below this are reported as exactly zero.
inline constexpr double kZeroObjective = 1e-12;

/// Min-statistic test; the rejection region is "statistic < lower alpha
/// quantile of min_{j in I} Z_j" with Z ~ N(0, Sigma(p_n)).
TestResult test_k_monotone_min(const CountSample& sample, const TestConfig& cfg);

/// Grenander-distance test of monotonicity (cfg.k is taken as 1).
TestResult test_monotone_projection(const CountSample& sample, const TestConfig& cfg);

/// Convex-LSE-distance test of convexity (cfg.k is taken as 2).
TestResult test_convex_projection(const CountSample& sample, const TestConfig& cfg);

/// Dispatch on cfg.kind and cfg.k. Throws InputError for a projection test
/// with k outside {1, 2} or for an invalid alpha / draw count.
TestResult run_test(const CountSample& sample, const TestConfig& cfg);

/// The calibration draws run_test would use for (sample, cfg).
DrawSet calibration_draws(const CountSample& sample, const TestConfig& cfg);

/// Test statistic only (no calibration).
double test_statistic(const EmpiricalPmf& p_hat, int k, TestKind kind);

}  // namespace kmono
