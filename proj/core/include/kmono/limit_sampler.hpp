#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "kmono/covariance.hpp"
#include "kmono/pmf.hpp"

namespace kmono {

enum class LimitLaw {
  MinStatistic,   // min_{j in I} Z_j
  MonotoneL2,     // ||G^M - G||_2
  ConvexL2,       // ||G^C - G||_2
  Bootstrap,      // resampled min statistic
  FiniteSample,   // the statistic itself over Monte Carlo replications
};

std::string_view to_string(LimitLaw law) noexcept;

/// B draws of one law, with the seed that produced them.
struct DrawSet {
  std::vector<double> draws;
  std::uint64_t seed = 0;
  LimitLaw law = LimitLaw::MinStatistic;

  std::size_t size() const noexcept { return draws.size(); }
};

enum class Tail { Lower, Upper };
std::string_view to_string(Tail tail) noexcept;

inline constexpr int kDefaultDraws = 1000;

/// B x dim matrix whose rows are i.i.d. N(0, cov) vectors (cov.factor() times
/// standard normals). Identical (cov, B, seed) give identical output.
Eigen::MatrixXd sample_gaussian(const CovMatrix& cov, int draws, std::uint64_t seed);

/// Draws of min_{j in I} Z_j with Z ~ N(0, cov). Row r of `cov` belongs to
/// index first_index + r; I holds absolute indices. Throws InputError for an
/// empty I or members outside the covariance range.
DrawSet sample_min_statistic(const CovMatrix& cov, const IndexSet& selected, int draws,
                             std::uint64_t seed, std::int64_t first_index = 0);

/// Draws of ||G^M - G||_2 with G ~ N(0, gamma) on {m, ..., M}. Each knot j
/// splits the support between j and j + 1; G is projected onto
/// non-increasing sequences block by block.
DrawSet sample_grenander_limit(const CovMatrix& gamma, const IndexSet& knots, int draws,
                               std::uint64_t seed, std::int64_t support_min = 0);

/// Draws of ||G^C - G||_2 where G^C is the projection of G onto sequences
/// that are convex on every linear region, i.e. nabla^2 q(l) >= 0 for each
/// l in S_2 that is not a knot.
DrawSet sample_convex_limit(const CovMatrix& gamma, const IndexSet& knots, int draws,
                            std::uint64_t seed, std::int64_t support_min = 0);

/// The ceil(alpha * B)-th order statistic (lower empirical quantile).
double empirical_quantile(const DrawSet& d, double alpha);

/// Critical value c with "t > c" <=> p_value(d, t, Upper) < alpha:
/// the (B - ceil(alpha * B) + 1)-th order statistic.
double upper_critical_value(const DrawSet& d, double alpha);

/// Lower tail: #(draws <= t) / B. Upper tail: #(draws >= t) / B.
double p_value(const DrawSet& d, double t, Tail tail);

/// Empirical CDF of `d` at x.
double empirical_cdf(const DrawSet& d, double x);

/// Two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)|.
double ks_distance(const DrawSet& a, const DrawSet& b);

}  // namespace kmono
