#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "kmono/distributions.hpp"
#include "kmono/limit_sampler.hpp"
#include "kmono/shape_tests.hpp"

namespace kmono {

/// The four test families of the simulation tables: min-statistic tests under
/// Methods 1, 2, 3 and the projection test.
enum class TestId { I, II, III, IV };

std::string_view to_string(TestId id) noexcept;
/// Accepts "i", "ii", "iii", "iv" (any case).
TestId parse_test_id(std::string_view text);

TestConfig make_test_config(TestId id, int k, double alpha, int draws, std::uint64_t seed);

struct Scenario {
  DistributionSpec spec;
  std::int64_t n = 0;
  int k = 1;
  TestId test = TestId::III;
};

struct StudyConfig {
  std::vector<Scenario> scenarios;
  int replications = 1000;
  int draws = kDefaultDraws;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  /// 0 means one worker per hardware thread.
  unsigned workers = 0;

  /// R = 200, B = 500.
  static StudyConfig quick(std::vector<Scenario> scenarios);
};

struct StudyRow {
  Scenario scenario;
  int replications = 0;
  int rejections = 0;
  int failures = 0;
  /// 100 * rejections / completed replications.
  double percentage = 0.0;
  /// 100 * sqrt(p (1 - p) / R).
  double standard_error = 0.0;
  double wall_seconds = 0.0;
  std::string first_error;
};

/// Sample seed of replication r. The calibration seed is derive_seed(this, 1).
/// Every scenario uses the same seeds, so tests on the same (law, n) see the
/// same samples and the same Gaussian draws.
std::uint64_t replication_seed(std::uint64_t base_seed, int r) noexcept;

/// Runs fn(0), ..., fn(count - 1) on `workers` threads (0 = hardware). fn
/// must only write to per-index state.
void parallel_for(int count, unsigned workers, const std::function<void(int)>& fn);

/// One row per scenario. Output does not depend on the worker count.
std::vector<StudyRow> run_study(const StudyConfig& cfg);

/// R Monte Carlo replications of the statistic at sample size n. Min
/// statistics are centered: sqrt(n) (rho_k(p_n) - rho_k(p)).
DrawSet finite_sample_statistics(const Pmf& p, std::int64_t n, int k, TestKind kind, int replications,
                                 std::uint64_t seed, unsigned workers = 0);

/// B bootstrap draws of sqrt(n) (min nabla^k p*_n - min nabla^k p_n), where
/// p*_n is the empirical p.m.f. of a resample of size n from p_n and both
/// minima run over the support of p_n.
DrawSet bootstrap_min_distribution(const CountSample& sample, int k, int draws, std::uint64_t seed);

struct ConsistencyPoint {
  std::int64_t n = 0;
  int replications = 0;
  int recovered = 0;
  double frequency = 0.0;
  double standard_error = 0.0;
};

/// Frequency with which the selected non-knot set equals argmin_set(p, k).
std::vector<ConsistencyPoint> knot_consistency_curve(const Pmf& p, int k,
                                                     const std::vector<std::int64_t>& n_grid,
                                                     int replications, std::uint64_t seed,
                                                     Method method = Method::M3,
                                                     unsigned workers = 0);

}  // namespace kmono
