#pragma once

// Two-stage exemplar-guided editing: source-conditioned sampling up to the
// transition index, reference-conditioned sampling afterwards. Also the
// reconstruction-then-invert baseline it replaces.

#include <cstddef>
#include <cstdint>
#include <optional>

#include "flowlab/core.hpp"
#include "flowlab/fields.hpp"
#include "flowlab/solver.hpp"

namespace flowlab {

struct EditConfig {
  double t_tau = 0.2;
  /// Background blend strength, used only by masked editing.
  double eta = 1.0;
  /// Replace the stage-1 model velocity with the model-free v* toward the source.
  bool deterministic_stage1 = false;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class EditMethod { ReInversion, ReconInv };

const char* to_string(EditMethod method);

struct EditOutcome {
  EditMethod method = EditMethod::ReInversion;
  LatentState edited;
  /// Sampling trajectory of the edit pass, both stages.
  Trajectory trajectory;
  /// Model evaluations over the whole pipeline.
  std::size_t nfe = 0;
  std::size_t stage_boundary = 0;
  LatentState initial_noise;
  /// ReconInv only: the state reached by walking the cached reconstruction
  /// velocities back from the source to the transition index.
  std::optional<LatentState> inverted_transition_state;
  /// ReconInv only: the reconstruction pass.
  std::optional<Trajectory> reconstruction;

  const LatentState& stage1_state() const { return trajectory.states[stage_boundary]; }
};

/// Smallest grid index i with t_i >= t_tau. Throws DegenerateSplit unless
/// 1 <= i <= n-1.
std::size_t transition_index(const TimeGrid& grid, double t_tau);

EditOutcome reinversion_edit(const VelocityField& field, const LatentState& source,
                             const LatentState& reference, const TimeGrid& grid,
                             const EditConfig& config);

/// Reconstruct the source (n evaluations), invert with the cached velocities,
/// then re-sample from the inverted noise with the two-stage schedule.
EditOutcome recon_inv_edit(const VelocityField& field, const LatentState& source,
                           const LatentState& reference, const TimeGrid& grid,
                           const EditConfig& config, const Mask* mask = nullptr);

/// a.nfe / b.nfe.
double nfe_speedup(const EditOutcome& a, const EditOutcome& b);

namespace detail {

/// Shared two-stage sampler starting from a time-0 state. A non-null mask
/// switches stage 2 to the masked velocity blend.
Trajectory two_stage_sample(const VelocityField& field, const LatentState& start,
                            const LatentState& source, const LatentState& reference,
                            const TimeGrid& grid, const EditConfig& config,
                            std::size_t boundary, const Mask* mask);

}  // namespace detail

}  // namespace flowlab
