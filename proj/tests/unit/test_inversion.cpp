#include <gtest/gtest.h>

#include <cmath>

#include "flowlab/inversion.hpp"
#include "flowlab/metrics.hpp"

using namespace flowlab;

namespace {

AffineFieldSpec random_affine(PriorSampler& rng, std::size_t d) {
  AffineFieldSpec s;
  const std::size_t knots = 2 + static_cast<std::size_t>(std::abs(rng.next_normal()) * 2) % 4;
  s.a_grid = TimeGrid::uniform(knots);
  for (std::size_t i = 0; i <= knots; ++i) s.a_values.push_back(0.8 * rng.next_normal());
  s.dim = d;
  s.condition_dim = d;
  s.b = rng.normals(d * d);
  s.b0 = rng.normals(d);
  return s;
}

}  // namespace

TEST(VanillaInvert, IdentityFieldExample) {
  const auto f = affine_field(AffineFieldSpec::scalar(1, 1.0));
  const InversionReport r = vanilla_invert(*f, LatentState({2.25}, 1.0), uniform_grid(2), Condition::none());
  EXPECT_DOUBLE_EQ(r.estimated_noise()[0], 0.5625);
  EXPECT_DOUBLE_EQ(r.intermediate_states[1][0], 1.125);
  EXPECT_EQ(r.nfe, 2u);
  EXPECT_TRUE(r.top_step_clamped);
  EXPECT_EQ(r.estimated_noise().time(), 0.0);
}

TEST(VanillaInvert, ConstantAndZeroFieldsAreExact) {
  const auto zero = constant_field({0.0, 0.0});
  const InversionReport r = vanilla_invert(*zero, LatentState({3.0, -4.0}, 1.0), uniform_grid(5), Condition::none());
  EXPECT_EQ(r.estimated_noise().vec(), (std::vector<double>{3.0, -4.0}));
  const auto k = constant_field({2.0, 0.5});
  const InversionReport q = vanilla_invert(*k, LatentState({3.0, -4.0}, 1.0), uniform_grid(4), Condition::none());
  EXPECT_DOUBLE_EQ(q.estimated_noise()[0], 1.0);
  EXPECT_DOUBLE_EQ(q.estimated_noise()[1], -4.5);
}

TEST(VanillaInvert, SourceMustBeAtOne) {
  const auto f = constant_field({0.0});
  EXPECT_THROW(vanilla_invert(*f, LatentState({1.0}, 0.5), uniform_grid(2), Condition::none()), Error);
}

TEST(IdealInvert, IdentityFieldRecoversStart) {
  const InversionReport r =
      ideal_invert_affine(AffineFieldSpec::scalar(1, 1.0), LatentState({2.25}, 1.0), uniform_grid(2), Condition::none());
  EXPECT_DOUBLE_EQ(r.estimated_noise()[0], 1.0);
  EXPECT_EQ(r.nfe, 0u);
}

TEST(IdealInvert, RecoversEulerStartOnRandomAffineFields) {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    PriorSampler rng(1000 + trial);
    const std::size_t d = 1 + trial % 4;
    const AffineFieldSpec spec = random_affine(rng, d);
    const auto f = affine_field(spec);
    const std::size_t n = 3 + trial;
    const TimeGrid grid = uniform_grid(n);
    const LatentState x0 = sample_prior(rng, d);
    const Condition c = Condition::source(rng.normals(d));
    const Trajectory fwd = euler_sample(*f, x0, grid, c);
    const InversionReport back = ideal_invert_affine(spec, fwd.final_state(), grid, c);
    for (std::size_t j = 0; j < d; ++j) EXPECT_NEAR(back.estimated_noise()[j], x0[j], 1e-10) << trial;
  }
}

TEST(IdealInvert, ZeroRateMatchesVanilla) {
  AffineFieldSpec spec = AffineFieldSpec::scalar(2, 0.0);
  spec.b0 = {1.0, -0.5};
  const auto f = affine_field(spec);
  const LatentState src({1.0, 2.0}, 1.0);
  const auto a = ideal_invert_affine(spec, src, uniform_grid(6), Condition::none());
  const auto b = vanilla_invert(*f, src, uniform_grid(6), Condition::none());
  for (std::size_t j = 0; j < 2; ++j) EXPECT_DOUBLE_EQ(a.estimated_noise()[j], b.estimated_noise()[j]);
}

TEST(IdealInvert, SingularStepIsReported) {
  // 1 + delta * a = 1 + 0.5 * (-2) = 0.
  try {
    ideal_invert_affine(AffineFieldSpec::scalar(1, -2.0), LatentState({1.0}, 1.0), uniform_grid(2), Condition::none());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularInversion);
  }
}

TEST(ReconInvert, ExactOnHandFixture) {
  // Reconstruction of v = x from X_0 = 1 ends at 2.25; walking back from the
  // same source returns 1 exactly.
  const auto f = affine_field(AffineFieldSpec::scalar(1, 1.0));
  const ReconInversion r = recon_invert(*f, LatentState({2.25}, 1.0), LatentState({1.0}, 0.0), uniform_grid(2));
  EXPECT_EQ(r.reconstruction.final_state()[0], 2.25);
  EXPECT_EQ(r.report.estimated_noise()[0], 1.0);
  EXPECT_EQ(r.report.nfe, 2u);
  EXPECT_EQ(error_identity_gap(r.report, r.reconstruction, LatentState({2.25}, 1.0), r.true_noise), 0.0);
}

TEST(ReconInvert, ElementwiseIdentityAcrossSeeds) {
  // X~_0 - X_0 = X^s - X^_1 coordinate by coordinate.
  const auto f = guided_field(3.0, {7, 16, 0.5, 8, 8});
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    PriorSampler data(seed + 5000);
    const LatentState src(data.normals(8), 1.0);
    PriorSampler noise(seed);
    const std::size_t n = seed % 2 ? 18 : 4;
    const ReconInversion r = recon_invert(*f, src, noise, uniform_grid(n));
    for (std::size_t j = 0; j < 8; ++j) {
      const double lhs = r.report.estimated_noise()[j] - r.true_noise[j];
      const double rhs = src[j] - r.reconstruction.final_state()[j];
      const double scale = std::max({1.0, std::abs(src[j]), std::abs(r.true_noise[j])});
      EXPECT_NEAR(lhs, rhs, 1e-12 * scale * static_cast<double>(n));
    }
  }
}

TEST(ReconInvert, GapExamples) {
  const auto f = constant_field({0.5, 0.5});
  const LatentState src({3.0, 4.0}, 1.0);
  const ReconInversion r = recon_invert(*f, src, LatentState({0.0, 0.0}, 0.0), uniform_grid(3));
  // Reconstruction ends at (0.5, 0.5); noise estimate is src - 0.5.
  EXPECT_NEAR(r.report.estimated_noise()[0], 2.5, 1e-15);
  EXPECT_NEAR(r.report.estimated_noise()[1], 3.5, 1e-15);
  EXPECT_NEAR(error_identity_gap(r.report, r.reconstruction, src, r.true_noise), 0.0, 1e-14);
}

TEST(ReconInvert, CachedVelocitySensitivity) {
  // Perturbing one cached velocity by delta moves the noise estimate by
  // exactly step * delta.
  const auto f = smooth_random_field({3, 16, 1.0, 4, 4});
  PriorSampler rng(9);
  const LatentState src(rng.normals(4), 1.0);
  const ReconInversion r = recon_invert(*f, src, rng, uniform_grid(6));
  Trajectory perturbed = r.reconstruction;
  const double delta = 0.37;
  perturbed.velocities[2][1] += delta;
  const auto a = invert_with_cached_velocities(src, r.reconstruction);
  const auto b = invert_with_cached_velocities(src, perturbed);
  const double step = uniform_grid(6).delta(2);
  EXPECT_GE(std::abs(a.front()[1] - b.front()[1]), step * delta * (1 - 1e-6));
  EXPECT_NEAR(a.front()[0], b.front()[0], 1e-15);
}

TEST(ReconInvert, NoiseMustBeAtZero) {
  const auto f = constant_field({0.0});
  EXPECT_THROW(recon_invert(*f, LatentState({1.0}, 1.0), LatentState({0.0}, 0.5), uniform_grid(2)), Error);
}

TEST(Drift, VanillaDriftGrowsOnExpandingField) {
  const auto f = affine_field(AffineFieldSpec::scalar(1, 1.0));
  const Trajectory fwd = euler_sample(*f, LatentState({1.0}, 0.0), uniform_grid(2), Condition::none());
  const InversionReport r = vanilla_invert(*f, fwd.final_state(), uniform_grid(2), Condition::none());
  const auto curve = drift_curve(r, fwd);
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_DOUBLE_EQ(curve[0].value, 0.4375);
  EXPECT_DOUBLE_EQ(curve[1].value, 0.375);
  EXPECT_DOUBLE_EQ(curve[2].value, 0.0);
}
