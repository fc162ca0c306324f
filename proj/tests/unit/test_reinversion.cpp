#include <gtest/gtest.h>

#include "flowlab/reinversion.hpp"

using namespace flowlab;

namespace {

struct Fixture {
  std::shared_ptr<SmoothRandomField> field = smooth_random_field({21, 16, 1.0, 6, 6});
  LatentState source;
  LatentState reference;
  Fixture()
      : source(PriorSampler(1).normals(6), 1.0), reference(PriorSampler(2).normals(6), 1.0) {}
};

EditConfig config(double t_tau, std::uint64_t seed = 3) {
  EditConfig c;
  c.t_tau = t_tau;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(TransitionIndex, Cases) {
  EXPECT_EQ(transition_index(uniform_grid(18), 0.2), 4u);
  EXPECT_EQ(transition_index(uniform_grid(10), 0.2), 2u);
  EXPECT_EQ(transition_index(uniform_grid(10), 0.15), 2u);
  EXPECT_EQ(transition_index(uniform_grid(4), 0.25), 1u);
  EXPECT_EQ(transition_index(uniform_grid(4), 0.01), 1u);
  EXPECT_THROW(transition_index(uniform_grid(4), 0.0), Error);
  EXPECT_THROW(transition_index(uniform_grid(4), 1.0), Error);
  for (double bad : {0.8, 0.9}) {
    try {
      transition_index(uniform_grid(4), bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::DegenerateSplit);
    }
  }
}

TEST(EditConfig, Validation) {
  EditConfig c;
  EXPECT_NO_THROW(c.validate());
  c.eta = 1.5;
  EXPECT_THROW(c.validate(), Error);
  c.eta = -0.1;
  EXPECT_THROW(c.validate(), Error);
  c.eta = 0.5;
  c.t_tau = 1.0;
  EXPECT_THROW(c.validate(), Error);
  c.t_tau = 0.0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(ReInversion, NfeCounts) {
  Fixture fx;
  const TimeGrid grid = uniform_grid(18);
  const EditOutcome re = reinversion_edit(*fx.field, fx.source, fx.reference, grid, config(0.2));
  EXPECT_EQ(re.nfe, 18u);
  EXPECT_EQ(re.stage_boundary, 4u);
  EXPECT_EQ(fx.field->eval_count(), 18u);

  EditConfig det = config(0.2);
  det.deterministic_stage1 = true;
  const EditOutcome star = reinversion_edit(*fx.field, fx.source, fx.reference, grid, det);
  EXPECT_EQ(star.nfe, 14u);

  const EditOutcome rc = recon_inv_edit(*fx.field, fx.source, fx.reference, grid, config(0.2));
  EXPECT_EQ(rc.nfe, 36u);
  EXPECT_EQ(fx.field->eval_count(), 18u + 14u + 36u);
  ASSERT_TRUE(rc.inverted_transition_state.has_value());
  ASSERT_TRUE(rc.reconstruction.has_value());

  EXPECT_DOUBLE_EQ(nfe_speedup(rc, re), 2.0);
  EXPECT_NEAR(nfe_speedup(re, star), 18.0 / 14.0, 1e-15);
  EXPECT_DOUBLE_EQ(nfe_speedup(re, re), 1.0);
}

TEST(ReInversion, SpeedupRejectsZeroNfe) {
  Fixture fx;
  const EditOutcome a = reinversion_edit(*fx.field, fx.source, fx.reference, uniform_grid(4), config(0.5));
  EditOutcome b = a;
  b.nfe = 0;
  EXPECT_THROW(nfe_speedup(a, b), Error);
}

TEST(ReInversion, StagesCollapseWhenConditionsAgree) {
  // With reference == source the two stages condition identically, so the
  // edit equals a plain source-conditioned sample bit for bit.
  Fixture fx;
  const TimeGrid grid = uniform_grid(12);
  const EditOutcome e = reinversion_edit(*fx.field, fx.source, fx.source, grid, config(0.3, 8));
  PriorSampler rng(8);
  const LatentState x0 = sample_prior(rng, 6);
  EXPECT_EQ(e.initial_noise, x0);
  const Trajectory plain = euler_sample(*fx.field, x0, grid, Condition::source(fx.source.vec()));
  EXPECT_EQ(e.edited.vec(), plain.final_state().vec());
}

TEST(ReInversion, StageConditionsSwitchAtBoundary) {
  Fixture fx;
  const EditOutcome e = reinversion_edit(*fx.field, fx.source, fx.reference, uniform_grid(10), config(0.2));
  ASSERT_EQ(e.trajectory.step_conditions.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(e.trajectory.step_conditions[i], i < 2 ? ConditionTag::Source : ConditionTag::Reference);
  }
  EXPECT_EQ(e.stage1_state().time(), 0.2);
}

TEST(ReInversion, DeterministicAcrossRuns) {
  Fixture fx;
  const auto a = reinversion_edit(*fx.field, fx.source, fx.reference, uniform_grid(18), config(0.2, 5));
  const auto b = reinversion_edit(*fx.field, fx.source, fx.reference, uniform_grid(18), config(0.2, 5));
  EXPECT_EQ(a.edited, b.edited);
  const auto c = reinversion_edit(*fx.field, fx.source, fx.reference, uniform_grid(18), config(0.2, 6));
  EXPECT_NE(a.edited, c.edited);
}

TEST(ReInversion, DimensionMismatch) {
  Fixture fx;
  EXPECT_THROW(reinversion_edit(*fx.field, fx.source, LatentState({1.0}, 1.0), uniform_grid(4), config(0.2)),
               Error);
}
