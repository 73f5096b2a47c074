#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "kmono/distributions.hpp"
#include "kmono/error.hpp"
#include "kmono/pmf.hpp"

namespace kmono {
namespace {

const double kConvexBoundary = 2.0 - std::sqrt(2.0);

std::string poisson(std::int64_t M, double lambda) {
  return "tpois:0:" + std::to_string(M) + ":" + std::to_string(lambda);
}

TEST(Triangular, TwoPoints) {
  const Pmf t = triangular(2);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_NEAR(t(0), 2.0 / 3, 1e-15);
  EXPECT_NEAR(t(1), 1.0 / 3, 1e-15);
  EXPECT_THROW(triangular(0), InputError);
}

TEST(Pmf, TruncatedPoissonFlatFirstStep) {
  const Pmf p = pmf(DistributionSpec::parse("tpois:0:4:1"));
  // Oracle: normalize (1, 1, 1/2, 1/6, 1/24).
  const std::vector<double> w = {1.0, 1.0, 0.5, 1.0 / 6, 1.0 / 24};
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  ASSERT_EQ(p.size(), 5u);
  for (std::int64_t j = 0; j < 5; ++j) EXPECT_NEAR(p(j), w[static_cast<std::size_t>(j)] / total, 1e-15);
  EXPECT_EQ(p(0), p(1));
}

TEST(Pmf, TruncatedBinomialMatchesChoose) {
  const Pmf p = pmf(DistributionSpec::parse("tbinom:1:9:4:0.3"));
  // Support ends at the number of trials.
  EXPECT_EQ(p.support_min(), 1);
  EXPECT_EQ(p.support_max(), 4);
  std::vector<double> w;
  for (int j = 1; j <= 4; ++j) {
    double choose = 1.0;
    for (int i = 0; i < j; ++i) choose = choose * (4 - i) / (i + 1);
    w.push_back(choose * std::pow(0.3, j) * std::pow(0.7, 4 - j));
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (int j = 1; j <= 4; ++j) EXPECT_NEAR(p(j), w[static_cast<std::size_t>(j - 1)] / total, 1e-14);
}

TEST(Pmf, EqualTriangularMixtureIsConvex) {
  const auto spec = DistributionSpec::parse("tmix:0.2x5");
  const Pmf p = pmf(spec);
  ASSERT_EQ(p.size(), 5u);
  EXPECT_NEAR(std::accumulate(p.probs().begin(), p.probs().end(), 0.0), 1.0, 1e-15);
  for (double d : forward_difference(p, 2)) EXPECT_GE(d, -1e-15);
  EXPECT_TRUE(classify(spec).convex);
}

TEST(Pmf, SingleTriangularMixtureIsTheTriangular) {
  for (int r = 1; r <= 6; ++r) {
    std::vector<double> w(static_cast<std::size_t>(r), 0.0);
    w.back() = 1.0;
    const Pmf mix = pmf(DistributionSpec(TriangularMixture{w}));
    const Pmf tri = triangular(r);
    ASSERT_EQ(mix.size(), tri.size());
    for (std::int64_t j = 0; j < r; ++j) EXPECT_NEAR(mix(j), tri(j), 1e-15);
  }
}

TEST(Pmf, SumsToOneOnFullSupport) {
  for (const char* text : {"tpois:2:12:3.5", "tbinom:0:20:20:0.9", "tmix:0.5,0,0.5", "weights:4:1,0,2"}) {
    const Pmf p = pmf(DistributionSpec::parse(text));
    EXPECT_NEAR(std::accumulate(p.probs().begin(), p.probs().end(), 0.0), 1.0, 1e-12) << text;
  }
  const Pmf p = pmf(DistributionSpec::parse("tpois:2:12:3.5"));
  EXPECT_EQ(p.support_min(), 2);
  EXPECT_EQ(p.support_max(), 12);
}

TEST(Classify, PoissonShapeTable) {
  for (std::int64_t M : {4, 9}) {
    const ShapeFlags two = classify(DistributionSpec::parse(poisson(M, 2.0)));
    EXPECT_FALSE(two.monotone);
    EXPECT_FALSE(two.convex);
    const ShapeFlags one = classify(DistributionSpec::parse(poisson(M, 1.0)));
    EXPECT_TRUE(one.monotone);
    EXPECT_FALSE(one.convex);
    EXPECT_EQ(one.rho1, 0.0);
    const ShapeFlags edge = classify(DistributionSpec(TruncPoisson{0, M, kConvexBoundary}));
    EXPECT_TRUE(edge.monotone);
    EXPECT_TRUE(edge.convex);
    EXPECT_NEAR(edge.rho2, 0.0, 1e-12);
  }
}

TEST(DistributionSpec, ParseAndPrintRoundTrip) {
  for (const char* text : {"tpois:0:4:1", "tpois:0:9:0.5857864376269049", "tbinom:0:4:4:0.5", "tmix:0.1x10",
                           "tmix:0.25,0.75", "weights:0:5,5,5,4,4,3,2,1,1,1"}) {
    const auto spec = DistributionSpec::parse(text);
    const auto again = DistributionSpec::parse(spec.to_string());
    EXPECT_EQ(again.to_string(), spec.to_string());
    EXPECT_EQ(pmf(again).probs(), pmf(spec).probs()) << text;
  }
  EXPECT_EQ(DistributionSpec::parse("tmix:0.2,0.2,0.2,0.2,0.2").to_string(), "tmix:0.2x5");
  EXPECT_EQ(DistributionSpec::parse("tbinom:0:4:4:0.5").to_string(), "tbinom:0:4:4:0.5");
  const auto exact = DistributionSpec(TruncPoisson{0, 4, kConvexBoundary});
  const auto copy = DistributionSpec::parse(exact.to_string());
  EXPECT_EQ(std::get<TruncPoisson>(copy.family()).lambda, kConvexBoundary);
}

TEST(DistributionSpec, RejectsMalformedText) {
  for (const char* text : {"tpois:0:4", "tpois:5:4:1", "tpois:0:4:-1", "tbinom:0:4:4:1.5", "tbinom:6:9:4:0.5",
                           "tmix:0.5,0.4", "tmix:", "weights:0:-1,2", "gauss:0:1", "tpois", "tpois:a:4:1"}) {
    EXPECT_THROW(DistributionSpec::parse(text), InputError) << text;
  }
}

TEST(SampleIid, SingleDrawInsideSupport) {
  const auto spec = DistributionSpec::parse("tpois:3:8:2");
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto sample = sample_iid(spec, 1, s);
    EXPECT_EQ(sample.n(), 1);
    EXPECT_GE(sample.min_value(), 3);
    EXPECT_LE(sample.max_value(), 8);
  }
  EXPECT_THROW(sample_iid(spec, 0, 1), InputError);
}

TEST(SampleIid, PointMassIsConstant) {
  const auto sample = sample_iid(DistributionSpec::parse("weights:7:1"), 100, 4);
  EXPECT_EQ(sample.min_value(), 7);
  EXPECT_EQ(sample.max_value(), 7);
  EXPECT_EQ(sample.count(7), 100);
}

TEST(SampleIid, LargeSampleIsClose) {
  const auto spec = DistributionSpec::parse("tpois:0:4:1");
  const Pmf truth = pmf(spec);
  const auto p_hat = build_empirical_pmf(sample_iid(spec, 100000, 5));
  for (std::int64_t j = 0; j <= 4; ++j) EXPECT_LE(std::abs(p_hat(j) - truth(j)), 0.01);
}

TEST(SampleIid, SeedDeterminesSample) {
  const auto spec = DistributionSpec::parse("tbinom:0:4:4:0.5");
  const auto a = build_empirical_pmf(sample_iid(spec, 1000, 9));
  const auto b = build_empirical_pmf(sample_iid(spec, 1000, 9));
  const auto c = build_empirical_pmf(sample_iid(spec, 1000, 10));
  EXPECT_EQ(a.probs(), b.probs());
  EXPECT_NE(a.probs(), c.probs());
}

}  // namespace
}  // namespace kmono
