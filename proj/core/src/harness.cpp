#include "kmono/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <exception>
#include <optional>
#include <random>
#include <thread>

#include "kmono/error.hpp"
#include "kmono/knots.hpp"
#include "kmono/random.hpp"

namespace kmono {

std::string_view to_string(TestId id) noexcept {
  switch (id) {
    case TestId::I: return "i";
    case TestId::II: return "ii";
    case TestId::III: return "iii";
    case TestId::IV: return "iv";
  }
  return "?";
}

TestId parse_test_id(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "i") return TestId::I;
  if (lower == "ii") return TestId::II;
  if (lower == "iii") return TestId::III;
  if (lower == "iv") return TestId::IV;
  throw InputError("unknown test id '" + std::string(text) + "'");
}

TestConfig make_test_config(TestId id, int k, double alpha, int draws, std::uint64_t seed) {
  TestConfig cfg;
  cfg.k = k;
  cfg.alpha = alpha;
  cfg.draws = draws;
  cfg.seed = seed;
  switch (id) {
    case TestId::I: cfg.method = Method::M1; break;
    case TestId::II: cfg.method = Method::M2; break;
    case TestId::III: cfg.method = Method::M3; break;
    case TestId::IV: cfg.kind = TestKind::Projection; break;
  }
  return cfg;
}

StudyConfig StudyConfig::quick(std::vector<Scenario> scenarios) {
  StudyConfig cfg;
  cfg.scenarios = std::move(scenarios);
  cfg.replications = 200;
  cfg.draws = 500;
  return cfg;
}

std::uint64_t replication_seed(std::uint64_t base_seed, int r) noexcept {
  return base_seed + static_cast<std::uint64_t>(r);
}

void parallel_for(int count, unsigned workers, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(count));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto body = [&] {
    for (int i = next.fetch_add(1); i < count && !failed.load(); i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<StudyRow> run_study(const StudyConfig& cfg) {
  if (cfg.replications < 1) throw InputError("replications must be positive");
  if (cfg.scenarios.empty()) throw InputError("study has no scenarios");
  std::vector<StudyRow> rows;
  for (const auto& sc : cfg.scenarios) {
    if (sc.n < 1) throw InputError("scenario sample size must be positive");
    const auto start = std::chrono::steady_clock::now();
    const Pmf law = pmf(sc.spec);
    // 0 = accept, 1 = reject, 2 = failed.
    std::vector<int> outcome(static_cast<std::size_t>(cfg.replications), 2);
    std::vector<std::string> errors(outcome.size());
    parallel_for(cfg.replications, cfg.workers, [&](int r) {
      const std::uint64_t seed = replication_seed(cfg.seed, r);
      try {
        const CountSample sample = sample_iid(law, sc.n, seed);
        const TestConfig tc = make_test_config(sc.test, sc.k, cfg.alpha, cfg.draws, derive_seed(seed, 1));
        outcome[static_cast<std::size_t>(r)] = run_test(sample, tc).reject ? 1 : 0;
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(r)] = e.what();
      }
    });
    StudyRow row{sc, 0, 0, 0, 0.0, 0.0, 0.0, {}};
    for (std::size_t r = 0; r < outcome.size(); ++r) {
      if (outcome[r] == 2) {
        if (row.failures++ == 0) row.first_error = errors[r];
      } else {
        ++row.replications;
        row.rejections += outcome[r];
      }
    }
    if (row.replications > 0) {
      const double p = static_cast<double>(row.rejections) / row.replications;
      row.percentage = 100.0 * p;
      row.standard_error = 100.0 * std::sqrt(p * (1.0 - p) / row.replications);
    }
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(std::move(row));
  }
  return rows;
}

DrawSet finite_sample_statistics(const Pmf& p, std::int64_t n, int k, TestKind kind, int replications,
                                 std::uint64_t seed, unsigned workers) {
  if (replications < 1) throw InputError("replications must be positive");
  const double centre =
      kind == TestKind::Min ? std::sqrt(static_cast<double>(n)) * rho_k(p, k) : 0.0;
  DrawSet out{std::vector<double>(static_cast<std::size_t>(replications)), seed, LimitLaw::FiniteSample};
  parallel_for(replications, workers, [&](int r) {
    const EmpiricalPmf p_hat = build_empirical_pmf(sample_iid(p, n, replication_seed(seed, r)));
    out.draws[static_cast<std::size_t>(r)] = test_statistic(p_hat, k, kind) - centre;
  });
  return out;
}

DrawSet bootstrap_min_distribution(const CountSample& sample, int k, int draws, std::uint64_t seed) {
  if (draws < 1) throw InputError("number of draws must be positive");
  const EmpiricalPmf p_hat = build_empirical_pmf(sample);
  const double rho_hat = rho_k(p_hat, k);
  const std::int64_t n = p_hat.n();
  const double root_n = std::sqrt(static_cast<double>(n));
  const auto& probs = p_hat.probs();
  Engine engine = make_engine(seed, 0);
  DrawSet out{std::vector<double>(static_cast<std::size_t>(draws)), seed, LimitLaw::Bootstrap};
  std::vector<double> resampled(probs.size());
  for (int b = 0; b < draws; ++b) {
    // Multinomial(n, p_n) through successive conditional binomials.
    std::int64_t left = n;
    double mass_left = 1.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      std::int64_t c = left;
      if (i + 1 < probs.size() && left > 0) {
        const double q = mass_left > probs[i] ? probs[i] / mass_left : 1.0;
        c = std::binomial_distribution<std::int64_t>(left, q)(engine);
      }
      resampled[i] = static_cast<double>(c) / static_cast<double>(n);
      left -= c;
      mass_left -= probs[i];
    }
    const auto d = forward_difference(resampled, k);
    out.draws[static_cast<std::size_t>(b)] = root_n * (*std::min_element(d.begin(), d.end()) - rho_hat);
  }
  return out;
}

std::vector<ConsistencyPoint> knot_consistency_curve(const Pmf& p, int k,
                                                     const std::vector<std::int64_t>& n_grid,
                                                     int replications, std::uint64_t seed,
                                                     Method method, unsigned workers) {
  if (replications < 1) throw InputError("replications must be positive");
  const IndexSet truth = argmin_set(p, k);
  std::vector<ConsistencyPoint> curve;
  for (std::int64_t n : n_grid) {
    std::vector<char> hit(static_cast<std::size_t>(replications), 0);
    parallel_for(replications, workers, [&](int r) {
      const EmpiricalPmf p_hat = build_empirical_pmf(sample_iid(p, n, replication_seed(seed, r)));
      if (p_hat.support_min() != p.support_min() || p_hat.support_max() != p.support_max()) return;
      hit[static_cast<std::size_t>(r)] = select(p_hat, k, method).selected == truth ? 1 : 0;
    });
    ConsistencyPoint pt;
    pt.n = n;
    pt.replications = replications;
    pt.recovered = static_cast<int>(std::count(hit.begin(), hit.end(), 1));
    pt.frequency = static_cast<double>(pt.recovered) / replications;
    pt.standard_error = std::sqrt(pt.frequency * (1.0 - pt.frequency) / replications);
    curve.push_back(pt);
  }
  return curve;
}

}  // namespace kmono
