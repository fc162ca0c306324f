#include "flowlab/reinversion.hpp"

#include <cmath>
#include <sstream>

#include "flowlab/inversion.hpp"
#include "flowlab/msd.hpp"

namespace flowlab {

void EditConfig::validate() const {
  if (!(t_tau > 0.0 && t_tau < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "t_tau must lie in (0, 1)");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(ErrorKind::InvalidArgument, "eta must lie in [0, 1]");
}

const char* to_string(EditMethod method) {
  switch (method) {
    case EditMethod::ReInversion: return "reinversion";
    case EditMethod::ReconInv: return "recon-inv";
  }
  return "?";
}

std::size_t transition_index(const TimeGrid& grid, double t_tau) {
  if (!(t_tau > 0.0 && t_tau < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "t_tau must lie in (0, 1)");
  }
  const std::size_t n = grid.steps();
  std::size_t tau = 0;
  while (tau <= n && grid[tau] < t_tau) ++tau;
  if (tau < 1 || tau > n - 1) {
    std::ostringstream msg;
    msg << "t_tau = " << t_tau << " snaps to index " << tau << " on a " << n
        << "-step grid; both stages need at least one step";
    throw Error(ErrorKind::DegenerateSplit, msg.str());
  }
  return tau;
}

namespace detail {

Trajectory two_stage_sample(const VelocityField& field, const LatentState& start,
                            const LatentState& source, const LatentState& reference,
                            const TimeGrid& grid, const EditConfig& config,
                            std::size_t boundary, const Mask* mask) {
  require_same_dim(source.dim(), field.condition_dim(), "source condition");
  require_same_dim(reference.dim(), field.condition_dim(), "reference condition");
  require_same_dim(source.dim(), field.dim(), "source state");
  const Condition on_source = Condition::source(source.vec());
  const Condition on_reference = Condition::reference(reference.vec());

  Trajectory traj = [&] {
    if (config.deterministic_stage1) {
      const auto toward_source = deterministic_target_field(source.vec(), /*free=*/true);
      return euler_sample_partial(*toward_source, start, grid, on_source, 0, boundary);
    }
    return euler_sample_partial(field, start, grid, on_source, 0, boundary);
  }();

  const LatentState& transition = traj.final_state();
  if (mask == nullptr) {
    traj.append(
        euler_sample_partial(field, transition, grid, on_reference, boundary, grid.steps()));
    return traj;
  }

  require_same_dim(mask->dim(), source.dim(), "mask");
  std::vector<double> model_v(source.dim());
  Trajectory masked = euler_integrate(
      transition, grid, boundary, grid.steps(),
      [&](std::span<const double> x, double t, std::size_t, std::span<double> out) {
        field.evaluate_into(x, t, on_reference, model_v);
        msd_velocity_into(model_v, x, source.values(), t, *mask, config.eta, out);
      });
  masked.step_conditions.assign(masked.velocities.size(), ConditionTag::Reference);
  if (field.counts_toward_nfe()) masked.model_evaluations = masked.velocities.size();
  traj.append(masked);
  return traj;
}

}  // namespace detail

EditOutcome reinversion_edit(const VelocityField& field, const LatentState& source,
                             const LatentState& reference, const TimeGrid& grid,
                             const EditConfig& config) {
  config.validate();
  const std::size_t tau = transition_index(grid, config.t_tau);
  PriorSampler prior(config.seed);
  LatentState x0 = sample_prior(prior, source.dim(), source.shape());
  Trajectory traj =
      detail::two_stage_sample(field, x0, source, reference, grid, config, tau, nullptr);
  LatentState edited = traj.final_state();
  const std::size_t nfe = traj.model_evaluations;
  return EditOutcome{EditMethod::ReInversion, std::move(edited), std::move(traj), nfe, tau,
                     std::move(x0), std::nullopt, std::nullopt};
}

EditOutcome recon_inv_edit(const VelocityField& field, const LatentState& source,
                           const LatentState& reference, const TimeGrid& grid,
                           const EditConfig& config, const Mask* mask) {
  config.validate();
  const std::size_t tau = transition_index(grid, config.t_tau);
  PriorSampler prior(config.seed);
  ReconInversion inversion = recon_invert(field, source.at_time(1.0), prior, grid);

  const LatentState& inverted_noise = inversion.report.estimated_noise();
  LatentState eq9_state = inversion.report.intermediate_states[tau];
  Trajectory traj =
      detail::two_stage_sample(field, inverted_noise, source, reference, grid, config, tau, mask);
  LatentState edited = traj.final_state();
  const std::size_t nfe = inversion.report.nfe + traj.model_evaluations;
  return EditOutcome{EditMethod::ReconInv,      std::move(edited),
                     std::move(traj),          nfe,
                     tau,                      std::move(inversion.true_noise),
                     std::move(eq9_state),     std::move(inversion.reconstruction)};
}

double nfe_speedup(const EditOutcome& a, const EditOutcome& b) {
  if (b.nfe == 0) throw Error(ErrorKind::InvalidArgument, "nfe speedup with a zero-NFE divisor");
  if (!(a.trajectory.grid == b.trajectory.grid)) {
    throw Error(ErrorKind::InvalidGrid, "nfe speedup compares runs on different grids");
  }
  return static_cast<double>(a.nfe) / static_cast<double>(b.nfe);
}

}  // namespace flowlab
