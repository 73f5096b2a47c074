#include "kmono/limit_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kmono/error.hpp"
#include "kmono/projections.hpp"
#include "kmono/random.hpp"

namespace kmono {

std::string_view to_string(LimitLaw law) noexcept {
  switch (law) {
    case LimitLaw::MinStatistic: return "min_statistic";
    case LimitLaw::MonotoneL2: return "monotone_l2";
    case LimitLaw::ConvexL2: return "convex_l2";
    case LimitLaw::Bootstrap: return "bootstrap";
    case LimitLaw::FiniteSample: return "finite_sample";
  }
  return "?";
}

std::string_view to_string(Tail tail) noexcept { return tail == Tail::Lower ? "lower" : "upper"; }

Eigen::MatrixXd sample_gaussian(const CovMatrix& cov, int draws, std::uint64_t seed) {
  if (draws < 1) throw InputError("number of draws must be positive");
  Engine engine = make_engine(seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index dim = cov.dim();
  Eigen::MatrixXd z(dim, draws);
  for (Eigen::Index b = 0; b < draws; ++b)
    for (Eigen::Index i = 0; i < dim; ++i) z(i, b) = normal(engine);
  return (cov.factor() * z).transpose();
}

DrawSet sample_min_statistic(const CovMatrix& cov, const IndexSet& selected, int draws,
                             std::uint64_t seed, std::int64_t first_index) {
  if (selected.empty()) throw InputError("empty index set for the min statistic");
  std::vector<Eigen::Index> cols;
  for (auto j : selected) {
    const std::int64_t r = j - first_index;
    if (r < 0 || r >= cov.dim()) throw InputError("index outside the covariance range");
    cols.push_back(static_cast<Eigen::Index>(r));
  }
  const Eigen::MatrixXd g = sample_gaussian(cov, draws, seed);
  DrawSet out{std::vector<double>(static_cast<std::size_t>(draws)), seed, LimitLaw::MinStatistic};
  for (Eigen::Index b = 0; b < draws; ++b) {
    double v = g(b, cols.front());
    for (auto c : cols) v = std::min(v, g(b, c));
    out.draws[static_cast<std::size_t>(b)] = v;
  }
  return out;
}

namespace {

void check_knots(const IndexSet& knots, std::int64_t support_min, Eigen::Index dim, int k) {
  for (auto j : knots) {
    const std::int64_t r = j - support_min;
    if (r < 0 || r > dim - 1 - k) throw InputError("inconsistent block partition");
  }
}

}  // namespace

DrawSet sample_grenander_limit(const CovMatrix& gamma, const IndexSet& knots, int draws,
                               std::uint64_t seed, std::int64_t support_min) {
  if (draws < 1) throw InputError("number of draws must be positive");
  const Eigen::Index dim = gamma.dim();
  check_knots(knots, support_min, dim, 1);
  // Block boundaries: a block ends at every knot and at the last point.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks;  // [begin, end)
  Eigen::Index begin = 0;
  for (Eigen::Index r = 0; r < dim; ++r) {
    if (r == dim - 1 || knots.contains(support_min + r)) {
      blocks.emplace_back(begin, r + 1);
      begin = r + 1;
    }
  }
  const bool trivial = std::all_of(blocks.begin(), blocks.end(),
                                   [](const auto& b) { return b.second - b.first < 2; });

  DrawSet out{std::vector<double>(static_cast<std::size_t>(draws), 0.0), seed, LimitLaw::MonotoneL2};
  if (trivial) {
    return out;
  }
  const Eigen::MatrixXd g = sample_gaussian(gamma, draws, seed);
  std::vector<double> block;
  for (Eigen::Index b = 0; b < draws; ++b) {
    double ss = 0.0;
    for (const auto& [lo, hi] : blocks) {
      if (hi - lo < 2) continue;
      block.assign(static_cast<std::size_t>(hi - lo), 0.0);
      for (Eigen::Index i = lo; i < hi; ++i) block[static_cast<std::size_t>(i - lo)] = g(b, i);
      const auto fit = project_monotone_block(block);
      for (std::size_t i = 0; i < block.size(); ++i) ss += (fit[i] - block[i]) * (fit[i] - block[i]);
    }
    out.draws[static_cast<std::size_t>(b)] = std::sqrt(ss);
  }
  return out;
}

DrawSet sample_convex_limit(const CovMatrix& gamma, const IndexSet& knots, int draws,
                            std::uint64_t seed, std::int64_t support_min) {
  if (draws < 1) throw InputError("number of draws must be positive");
  const Eigen::Index dim = gamma.dim();
  if (dim >= 3) check_knots(knots, support_min, dim, 2);
  else if (!knots.empty()) throw InputError("inconsistent block partition");

  std::vector<char> constrained(dim >= 3 ? static_cast<std::size_t>(dim - 2) : 0, 0);
  for (std::size_t l = 0; l < constrained.size(); ++l)
    constrained[l] = knots.contains(support_min + static_cast<std::int64_t>(l)) ? 0 : 1;

  DrawSet out{std::vector<double>(static_cast<std::size_t>(draws), 0.0), seed, LimitLaw::ConvexL2};
  if (std::none_of(constrained.begin(), constrained.end(), [](char c) { return c != 0; })) {
    return out;
  }
  const Eigen::MatrixXd g = sample_gaussian(gamma, draws, seed);
  std::vector<double> row(static_cast<std::size_t>(dim));
  for (Eigen::Index b = 0; b < draws; ++b) {
    for (Eigen::Index i = 0; i < dim; ++i) row[static_cast<std::size_t>(i)] = g(b, i);
    const auto fit = project_convex_masked(row, constrained);
    double ss = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) ss += (fit[i] - row[i]) * (fit[i] - row[i]);
    out.draws[static_cast<std::size_t>(b)] = std::sqrt(ss);
  }
  return out;
}

namespace {

std::size_t ceil_count(double alpha, std::size_t b) {
  // Guard against alpha * B landing a hair above an integer.
  const double x = alpha * static_cast<double>(b);
  return static_cast<std::size_t>(std::ceil(x - 1e-9 * std::max(1.0, x)));
}

std::vector<double> sorted_draws(const DrawSet& d) {
  if (d.draws.empty()) throw InputError("empty draw set");
  std::vector<double> s = d.draws;
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

double empirical_quantile(const DrawSet& d, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("quantile level must lie in (0, 1)");
  const auto s = sorted_draws(d);
  const std::size_t idx = std::clamp<std::size_t>(ceil_count(alpha, s.size()), 1, s.size());
  return s[idx - 1];
}

double upper_critical_value(const DrawSet& d, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("level must lie in (0, 1)");
  const auto s = sorted_draws(d);
  const std::size_t c = ceil_count(alpha, s.size());
  const std::size_t idx = std::clamp<std::size_t>(s.size() - c + 1, 1, s.size());
  return s[idx - 1];
}

double p_value(const DrawSet& d, double t, Tail tail) {
  if (d.draws.empty()) throw InputError("empty draw set");
  std::size_t count = 0;
  for (double x : d.draws) count += (tail == Tail::Lower ? x <= t : x >= t) ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(d.draws.size());
}

double empirical_cdf(const DrawSet& d, double x) { return p_value(d, x, Tail::Lower); }

double ks_distance(const DrawSet& a, const DrawSet& b) {
  const auto sa = sorted_draws(a);
  const auto sb = sorted_draws(b);
  const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < sa.size() || j < sb.size()) {
    double x;
    if (j >= sb.size() || (i < sa.size() && sa[i] <= sb[j])) x = sa[i];
    else x = sb[j];
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

}  // namespace kmono
