#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "flowlab/core.hpp"

using namespace flowlab;

TEST(PriorSampler, SameSeedSameValues) {
  PriorSampler a(7), b(7);
  EXPECT_EQ(sample_prior(a, 4).vec(), sample_prior(b, 4).vec());
}

TEST(PriorSampler, DifferentSeedsDiffer) {
  PriorSampler a(7), b(8);
  EXPECT_NE(sample_prior(a, 4).vec(), sample_prior(b, 4).vec());
}

TEST(PriorSampler, StandardNormalMoments) {
  // Mean of 1e4 standard normals has sd 1/100; allow 5 sigma.
  PriorSampler s(7);
  const LatentState x = sample_prior(s, 10'000);
  const double mean = std::accumulate(x.vec().begin(), x.vec().end(), 0.0) / 1e4;
  EXPECT_LE(std::abs(mean), 5.0 / 100.0);
  double var = 0.0;
  for (double v : x.vec()) var += (v - mean) * (v - mean);
  var /= 1e4 - 1;
  // Var of the sample variance ~ 2/N -> sd ~ 0.0141.
  EXPECT_NEAR(var, 1.0, 5 * 0.0142);
  EXPECT_EQ(x.time(), 0.0);
}

TEST(PriorSampler, ZeroDimensionRejected) {
  PriorSampler s(1);
  try {
    sample_prior(s, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidDimension);
  }
}

TEST(TimeGrid, UniformExamples) {
  EXPECT_EQ(uniform_grid(2).times(), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(uniform_grid(1).times(), (std::vector<double>{0.0, 1.0}));
  const TimeGrid g18 = uniform_grid(18);
  EXPECT_EQ(g18.steps(), 18u);
  EXPECT_NEAR(g18[4], 0.2222222222, 1e-10);
  EXPECT_DOUBLE_EQ(g18[4], 4.0 / 18.0);
}

TEST(TimeGrid, ZeroStepsRejected) {
  EXPECT_THROW(uniform_grid(0), Error);
}

TEST(TimeGrid, DeltasSumToOne) {
  for (std::size_t n : {1u, 2u, 3u, 7u, 18u, 50u, 999u}) {
    const TimeGrid g = uniform_grid(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_GT(g.delta(i), 0.0);
      total += g.delta(i);
    }
    EXPECT_NEAR(total, 1.0, 1e-12) << n;
  }
  const TimeGrid shifted({0.0, 0.05, 0.3, 0.31, 0.9, 1.0});
  double total = 0.0;
  for (std::size_t i = 0; i < shifted.steps(); ++i) total += shifted.delta(i);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(TimeGrid, InvalidGridsRejected) {
  EXPECT_THROW(TimeGrid({0.0}), Error);
  EXPECT_THROW(TimeGrid({0.1, 1.0}), Error);
  EXPECT_THROW(TimeGrid({0.0, 0.9}), Error);
  EXPECT_THROW(TimeGrid({0.0, 0.5, 0.5, 1.0}), Error);
  EXPECT_THROW(TimeGrid({0.0, 0.6, 0.4, 1.0}), Error);
}

TEST(LatentState, Invariants) {
  EXPECT_THROW(LatentState({}, 0.0), Error);
  EXPECT_THROW(LatentState({1.0, NAN}, 0.0), Error);
  EXPECT_THROW(LatentState({1.0}, 1.5), Error);
  EXPECT_THROW(LatentState({1.0, 2.0, 3.0}, 0.0, GridShape(2, 2)), Error);
  EXPECT_NO_THROW(LatentState({1.0, 2.0, 3.0, 4.0}, 0.5, GridShape(2, 2)));
  EXPECT_THROW(GridShape(0, 3), Error);
}

TEST(Mask, Invariants) {
  EXPECT_THROW(Mask({0.0, 1.5}), Error);
  EXPECT_THROW(Mask({-0.1}), Error);
  EXPECT_EQ(Mask({1.0, 0.0, 1.0, 0.5}).count_ones(), 2u);
  EXPECT_EQ(Mask::ones(5).count_ones(), 5u);
}

TEST(Condition, PayloadPresentIffTagged) {
  EXPECT_FALSE(Condition::none().has_payload());
  EXPECT_TRUE(Condition::source({1.0}).has_payload());
  EXPECT_EQ(Condition::reference({1.0, 2.0}).tag(), ConditionTag::Reference);
  EXPECT_THROW(Condition::source({}), Error);
}
