#include <gtest/gtest.h>

#include "flowlab/metrics.hpp"

using namespace flowlab;

TEST(Metrics, L2Examples) {
  const std::vector<double> a{1.0, 2.0};
  EXPECT_EQ(l2(a, a), 0.0);
  EXPECT_EQ(l2(std::vector<double>{0.0, 0.0}, std::vector<double>{3.0, 4.0}), 5.0);
  EXPECT_EQ(l2(std::vector<double>{1.0}, std::vector<double>{0.5625}), 0.4375);
  EXPECT_THROW(l2(a, std::vector<double>{1.0}), Error);
}

TEST(Metrics, MeanAbsExamples) {
  const std::vector<double> a{1.0, -2.0, 3.0};
  EXPECT_EQ(mean_abs(a, a), 0.0);
  EXPECT_EQ(mean_abs(std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, -1.0}), 1.0);
  EXPECT_NEAR(mean_abs(std::vector<double>{0.0, 0.0, 0.0, 0.0}, std::vector<double>{0.016, -0.016, 0.016, -0.016}),
              0.016, 1e-18);
}

TEST(Metrics, TriangleInequality) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    PriorSampler rng(s);
    const auto a = rng.normals(7), b = rng.normals(7), c = rng.normals(7);
    EXPECT_LE(l2(a, c), l2(a, b) + l2(b, c) + 1e-15);
    EXPECT_LE(mean_abs(a, c), mean_abs(a, b) + mean_abs(b, c) + 1e-15);
  }
}

TEST(Metrics, DriftCurveZeroOnExactInversion) {
  const auto f = constant_field({1.0, -1.0});
  const Trajectory fwd = euler_sample(*f, LatentState({0.0, 0.0}, 0.0), uniform_grid(4), Condition::none());
  const InversionReport r = vanilla_invert(*f, fwd.final_state(), uniform_grid(4), Condition::none());
  const auto curve = drift_curve(r, fwd);
  ASSERT_EQ(curve.size(), 5u);
  for (std::size_t i = 0; i < curve.size(); ++i) {
    EXPECT_DOUBLE_EQ(curve[i].t, 0.25 * static_cast<double>(i));
    EXPECT_NEAR(curve[i].value, 0.0, 1e-15);
  }
}

TEST(Metrics, DriftCurveGridMismatch) {
  const auto f = constant_field({1.0});
  const Trajectory fwd = euler_sample(*f, LatentState({0.0}, 0.0), uniform_grid(4), Condition::none());
  const InversionReport r = vanilla_invert(*f, fwd.final_state(), uniform_grid(3), Condition::none());
  try {
    drift_curve(r, fwd);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidGrid);
  }
}
