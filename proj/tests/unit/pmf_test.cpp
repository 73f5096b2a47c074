#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "kmono/distributions.hpp"
#include "kmono/error.hpp"
#include "kmono/pmf.hpp"
#include "oracles.hpp"

namespace kmono {
namespace {

const std::vector<double> kFigureOneWeights = {5, 5, 5, 4, 4, 3, 2, 1, 1, 1};

Pmf figure_one() { return Pmf::from_weights(0, kFigureOneWeights); }

TEST(CountSample, BuildsFromValues) {
  const auto s = CountSample::from_values({0, 0, 1, 3});
  EXPECT_EQ(s.n(), 4);
  EXPECT_EQ(s.min_value(), 0);
  EXPECT_EQ(s.max_value(), 3);
  EXPECT_EQ(s.count(2), 0);
  EXPECT_EQ(s.count(0), 2);
}

TEST(CountSample, RejectsBadInput) {
  EXPECT_THROW(CountSample::from_values(std::vector<std::int64_t>{}), InputError);
  EXPECT_THROW(CountSample::from_values({1, -2}), InputError);
  const std::vector<std::pair<std::int64_t, std::int64_t>> zero = {{0, 0}, {3, 0}};
  EXPECT_THROW(CountSample::from_frequencies(zero), InputError);
  const std::vector<std::pair<std::int64_t, std::int64_t>> negative = {{0, -1}};
  EXPECT_THROW(CountSample::from_frequencies(negative), InputError);
}

TEST(EmpiricalPmf, CountsWithInteriorZeros) {
  const auto p = build_empirical_pmf(CountSample::from_values({0, 0, 1, 3}));
  EXPECT_EQ(p.support_min(), 0);
  ASSERT_EQ(p.probs(), (std::vector<double>{0.5, 0.25, 0.0, 0.25}));
  EXPECT_EQ(p.n(), 4);
}

TEST(EmpiricalPmf, SinglePointSupport) {
  const auto p = build_empirical_pmf(CountSample::from_values({2, 2, 2}));
  EXPECT_EQ(p.support_min(), 2);
  ASSERT_EQ(p.probs(), std::vector<double>{1.0});
}

TEST(EmpiricalPmf, ConvergesOnFigureOneLaw) {
  const Pmf truth = figure_one();
  const auto p = build_empirical_pmf(sample_iid(truth, 10000, 11));
  for (std::int64_t j = 0; j <= 9; ++j) EXPECT_NEAR(p(j), truth(j), 0.02) << "j=" << j;
}

TEST(Pmf, ValidatesInvariants) {
  EXPECT_THROW(Pmf(0, {0.5, 0.4}), InputError);
  EXPECT_THROW(Pmf(0, {0.0, 1.0}), InputError);
  EXPECT_THROW(Pmf(0, {1.5, -0.5}), InputError);
  EXPECT_NO_THROW(Pmf(0, {0.5, 0.0, 0.5}));
}

TEST(ForwardDifference, ExampleOneIsConvex) {
  const Pmf p(0, {1.0 / 3, 1.0 / 6, 1.0 / 6, 1.0 / 3});
  const auto d = forward_difference(p, 2);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_NEAR(d[0], 1.0 / 6, 1e-15);
  EXPECT_NEAR(d[1], 1.0 / 6, 1e-15);
  EXPECT_NEAR(rho_k(p, 2), 1.0 / 6, 1e-15);
}

TEST(ForwardDifference, UniformIsFlat) {
  const auto d = forward_difference(Pmf(0, std::vector<double>(5, 0.2)), 1);
  ASSERT_EQ(d.size(), 4u);
  for (double x : d) EXPECT_EQ(x, 0.0);
}

TEST(ForwardDifference, FigureOneSlopes) {
  // Oracle: p(j) - p(j + 1) evaluated on the integer weights, then scaled.
  const auto d = forward_difference(figure_one(), 1);
  ASSERT_EQ(d.size(), 9u);
  for (std::size_t j = 0; j < 9; ++j)
    EXPECT_NEAR(d[j], (kFigureOneWeights[j] - kFigureOneWeights[j + 1]) / 31.0, 1e-15);
}

TEST(ForwardDifference, SupportTooShort) {
  try {
    forward_difference(Pmf(0, {0.5, 0.5}), 2);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_STREQ(e.what(), "support too short for degree k");
  }
}

TEST(RhoK, Examples) {
  EXPECT_EQ(rho_k(figure_one(), 1), 0.0);
  EXPECT_NEAR(rho_k(Pmf(0, {0.2, 0.5, 0.3}), 1), -0.3, 1e-15);
}

TEST(ArgminSet, FigureOneFlatSteps) {
  EXPECT_EQ(argmin_set(figure_one(), 1), (IndexSet{0, 1, 3, 7, 8}));
}

TEST(ArgminSet, TruncatedPoissonFirstStep) {
  // Oracle: weights 1, 1, 1/2, 1/6, 1/24 have a single flat step at 0.
  const Pmf p = Pmf::from_weights(0, {1.0, 1.0, 0.5, 1.0 / 6, 1.0 / 24});
  EXPECT_EQ(argmin_set(p, 1), IndexSet{0});
  EXPECT_EQ(argmin_set(pmf(DistributionSpec::parse("tpois:0:4:1")), 1), IndexSet{0});
}

TEST(ArgminSet, ConstantSlopeTiesEverywhere) {
  EXPECT_EQ(argmin_set(Pmf(0, {0.4, 0.3, 0.2, 0.1}), 1), (IndexSet{0, 1, 2}));
}

TEST(IndexSet, SetAlgebra) {
  const DiffSupport s{2, 6, 1};
  const IndexSet a{5, 3, 3};
  EXPECT_EQ(a.members(), (std::vector<std::int64_t>{3, 5}));
  EXPECT_EQ(a.complement_in(s), (IndexSet{2, 4, 6}));
  EXPECT_TRUE(a.is_subset_of(IndexSet::all_of(s)));
  EXPECT_FALSE(IndexSet::all_of(s).is_subset_of(a));
}

class DifferenceProperties : public ::testing::TestWithParam<int> {};

TEST_P(DifferenceProperties, LinearTelescopingAndComposed) {
  std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(GetParam()));
  std::uniform_int_distribution<std::size_t> len(3, 9);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = len(rng);
    const auto p = oracle::random_simplex(rng, n);
    const auto q = oracle::random_simplex(rng, n);
    const double a = coef(rng), b = coef(rng);
    std::vector<double> mix(n);
    for (std::size_t i = 0; i < n; ++i) mix[i] = a * p[i] + b * q[i];
    for (int k = 1; k <= 2; ++k) {
      const auto dm = forward_difference(mix, k);
      const auto dp = forward_difference(p, k);
      const auto dq = forward_difference(q, k);
      for (std::size_t j = 0; j < dm.size(); ++j) EXPECT_NEAR(dm[j], a * dp[j] + b * dq[j], 1e-12);
    }
    const auto d1 = forward_difference(p, 1);
    double total = 0.0;
    for (double x : d1) total += x;
    EXPECT_NEAR(total, p.front() - p.back(), 1e-14);
    // nabla^2 is nabla^1 applied to nabla^1.
    const auto d11 = forward_difference(d1, 1);
    const auto d2 = forward_difference(p, 2);
    for (std::size_t j = 0; j < d2.size(); ++j) EXPECT_NEAR(d2[j], d11[j], 1e-14);
  }
}

TEST_P(DifferenceProperties, RhoSignAndArgmin) {
  std::mt19937_64 rng(2000 + static_cast<std::uint64_t>(GetParam()));
  std::uniform_int_distribution<std::size_t> len(3, 9);
  for (int trial = 0; trial < 200; ++trial) {
    const Pmf p(0, oracle::random_simplex(rng, len(rng)));
    for (int k = 1; k <= 2; ++k) {
      const auto d = forward_difference(p, k);
      const double rho = rho_k(p, k);
      bool all_non_negative = true;
      for (double x : d) all_non_negative = all_non_negative && x >= 0.0;
      EXPECT_EQ(rho >= 0.0, all_non_negative);
      const IndexSet I = argmin_set(p, k);
      ASSERT_FALSE(I.empty());
      for (auto j : I) EXPECT_LE(std::abs(d[static_cast<std::size_t>(j)] - rho), 1e-12);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, DifferenceProperties, ::testing::Range(0, 3));

}  // namespace
}  // namespace kmono
