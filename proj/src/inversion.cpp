#include "flowlab/inversion.hpp"

#include <algorithm>
#include <cmath>

#include "flowlab/kernels.hpp"
#include "flowlab/metrics.hpp"

namespace flowlab {

const char* to_string(InversionMethod method) {
  switch (method) {
    case InversionMethod::Vanilla: return "vanilla";
    case InversionMethod::IdealAffine: return "ideal-affine";
    case InversionMethod::ReconInv: return "recon";
  }
  return "?";
}

namespace {

void require_data_time(const LatentState& source) {
  require_time(source.time(), 1.0, "inversion source");
}

}  // namespace

InversionReport vanilla_invert(const VelocityField& field, const LatentState& source,
                               const TimeGrid& grid, const Condition& condition) {
  require_data_time(source);
  require_same_dim(source.dim(), field.dim(), "vanilla_invert");
  const std::size_t n = grid.steps();
  InversionReport report{InversionMethod::Vanilla, grid, {}, 0, false};

  std::vector<LatentState> backward;
  backward.reserve(n + 1);
  backward.push_back(source);
  std::vector<double> v(source.dim());
  std::vector<double> prev(source.dim());
  for (std::size_t i = n; i-- > 0;) {
    const LatentState& later = backward.back();
    double t_eval = grid[i + 1];
    if (t_eval > kTopStepTime) {
      t_eval = kTopStepTime;
      report.top_step_clamped = true;
    }
    field.evaluate_into(later.values(), t_eval, condition, v);
    if (field.counts_toward_nfe()) ++report.nfe;
    kernels::add_scaled(prev, later.values(), v, -grid.delta(i));
    if (!std::all_of(prev.begin(), prev.end(), [](double x) { return std::isfinite(x); })) {
      throw Error(ErrorKind::DivergedIntegration,
                  "vanilla inversion diverged at step " + std::to_string(i));
    }
    backward.emplace_back(prev, grid[i], source.shape());
  }
  std::reverse(backward.begin(), backward.end());
  report.intermediate_states = std::move(backward);
  return report;
}

InversionReport ideal_invert_affine(const AffineFieldSpec& spec, const LatentState& source,
                                    const TimeGrid& grid, const Condition& condition) {
  spec.validate();
  require_data_time(source);
  require_same_dim(source.dim(), spec.dim, "ideal_invert_affine");
  if (condition.has_payload()) {
    require_same_dim(condition.payload().size(), spec.condition_dim, "condition payload");
  }
  const std::vector<double> k = spec.offset(condition.payload());
  const std::size_t n = grid.steps();
  InversionReport report{InversionMethod::IdealAffine, grid, {}, 0, false};

  std::vector<LatentState> backward;
  backward.reserve(n + 1);
  backward.push_back(source);
  std::vector<double> prev(source.dim());
  for (std::size_t i = n; i-- > 0;) {
    const double dt = grid.delta(i);
    const double denom = 1.0 + dt * spec.a_at(grid[i]);
    if (std::abs(denom) < 1e-12) {
      throw Error(ErrorKind::SingularInversion,
                  "implicit step " + std::to_string(i) + " is singular (a(t_i) * dt = -1)");
    }
    const auto later = backward.back().values();
    for (std::size_t j = 0; j < prev.size(); ++j) prev[j] = (later[j] - dt * k[j]) / denom;
    backward.emplace_back(prev, grid[i], source.shape());
  }
  std::reverse(backward.begin(), backward.end());
  report.intermediate_states = std::move(backward);
  return report;
}

std::vector<LatentState> invert_with_cached_velocities(const LatentState& source,
                                                       const Trajectory& reconstruction) {
  require_data_time(source);
  const TimeGrid& grid = reconstruction.grid;
  const std::size_t from = reconstruction.from_index;
  std::vector<LatentState> backward;
  backward.reserve(reconstruction.velocities.size() + 1);
  backward.push_back(source);
  std::vector<double> prev(source.dim());
  for (std::size_t k = reconstruction.velocities.size(); k-- > 0;) {
    const std::size_t i = from + k;
    require_same_dim(reconstruction.velocities[k].size(), source.dim(), "cached velocity");
    kernels::add_scaled(prev, backward.back().values(), reconstruction.velocities[k],
                        -grid.delta(i));
    backward.emplace_back(prev, grid[i], source.shape());
  }
  std::reverse(backward.begin(), backward.end());
  return backward;
}

ReconInversion recon_invert(const VelocityField& field, const LatentState& source,
                            PriorSampler& noise, const TimeGrid& grid) {
  return recon_invert(field, source, sample_prior(noise, source.dim(), source.shape()), grid);
}

ReconInversion recon_invert(const VelocityField& field, const LatentState& source,
                            const LatentState& noise, const TimeGrid& grid) {
  require_data_time(source);
  require_same_dim(source.dim(), field.dim(), "recon_invert");
  require_same_dim(noise.dim(), field.dim(), "recon_invert noise");
  require_time(noise.time(), 0.0, "recon_invert noise");
  LatentState x0 = noise;
  Trajectory recon = euler_sample(field, x0, grid, Condition::source(source.vec()));
  InversionReport report{InversionMethod::ReconInv, grid, {}, recon.model_evaluations, false};
  report.intermediate_states = invert_with_cached_velocities(source, recon);
  return {std::move(report), std::move(recon), std::move(x0)};
}

double error_identity_gap(const InversionReport& report, const Trajectory& reconstruction,
                          const LatentState& source, const LatentState& true_noise) {
  const double inversion_error = l2(report.estimated_noise().values(), true_noise.values());
  const double reconstruction_error = l2(source.values(), reconstruction.final_state().values());
  return std::abs(inversion_error - reconstruction_error);
}

}  // namespace flowlab
