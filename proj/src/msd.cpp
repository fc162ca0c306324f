#include "flowlab/msd.hpp"

#include "flowlab/kernels.hpp"

namespace flowlab {

void msd_velocity_into(std::span<const double> model_v, std::span<const double> state,
                       std::span<const double> source, double t, const Mask& mask, double eta,
                       std::span<double> out) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(ErrorKind::InvalidArgument, "eta must lie in [0, 1]");
  require_same_dim(model_v.size(), state.size(), "msd model velocity");
  require_same_dim(source.size(), state.size(), "msd source");
  require_same_dim(mask.dim(), state.size(), "msd mask");
  require_same_dim(out.size(), state.size(), "msd output");
  std::vector<double> toward_source(state.size());
  kernels::target_velocity(toward_source, source, state, t);
  kernels::masked_blend(out, model_v, toward_source, mask.values(), eta);
}

std::vector<double> msd_velocity(std::span<const double> model_v, std::span<const double> state,
                                 std::span<const double> source, double t, const Mask& mask,
                                 double eta) {
  std::vector<double> out(state.size());
  msd_velocity_into(model_v, state, source, t, mask, eta, out);
  return out;
}

EditOutcome msd_edit(const VelocityField& field, const LatentState& source,
                     const LatentState& reference, const TimeGrid& grid,
                     const EditConfig& config, const Mask& mask) {
  config.validate();
  const std::size_t tau = transition_index(grid, config.t_tau);
  PriorSampler prior(config.seed);
  LatentState x0 = sample_prior(prior, source.dim(), source.shape());
  Trajectory traj =
      detail::two_stage_sample(field, x0, source, reference, grid, config, tau, &mask);
  LatentState edited = traj.final_state();
  const std::size_t nfe = traj.model_evaluations;
  return EditOutcome{EditMethod::ReInversion, std::move(edited), std::move(traj), nfe, tau,
                     std::move(x0), std::nullopt, std::nullopt};
}

}  // namespace flowlab
