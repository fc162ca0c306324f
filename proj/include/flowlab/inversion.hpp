#pragma once

// Backward procedures from a data sample to an estimated noise: approximate
// (vanilla) inversion, the exact implicit inversion for affine fields, and
// reconstruction-based inversion with cached velocities.

#include <cstddef>
#include <utility>
#include <vector>

#include "flowlab/core.hpp"
#include "flowlab/fields.hpp"
#include "flowlab/solver.hpp"

namespace flowlab {

enum class InversionMethod { Vanilla, IdealAffine, ReconInv };

const char* to_string(InversionMethod method);

/// Time at which the top backward step of vanilla inversion evaluates the
/// field, since fields are never evaluated at t = 1.
inline constexpr double kTopStepTime = 1.0 - 1e-9;

struct InversionReport {
  InversionMethod method = InversionMethod::Vanilla;
  TimeGrid grid = TimeGrid::uniform(1);
  /// Backward states at nodes t_0..t_n (index-aligned with the grid).
  std::vector<LatentState> intermediate_states;
  std::size_t nfe = 0;
  /// True when the top-step evaluation time was clamped to kTopStepTime.
  bool top_step_clamped = false;

  const LatentState& estimated_noise() const { return intermediate_states.front(); }
};

/// X_i = X_{i+1} - delta_i * v(X_{i+1}, t_{i+1}), from i = n-1 down to 0.
InversionReport vanilla_invert(const VelocityField& field, const LatentState& source,
                               const TimeGrid& grid, const Condition& condition);

/// X_i = (X_{i+1} - delta_i * (B c + b0)) / (1 + delta_i * a(t_i)).
/// Throws SingularInversion when 1 + delta_i * a(t_i) vanishes.
InversionReport ideal_invert_affine(const AffineFieldSpec& spec, const LatentState& source,
                                    const TimeGrid& grid, const Condition& condition);

struct ReconInversion {
  InversionReport report;
  /// Forward reconstruction conditioned on the source, velocities cached.
  Trajectory reconstruction;
  /// The prior draw that seeded the reconstruction.
  LatentState true_noise;
};

/// Samples X_0 from the prior, reconstructs the source with the field
/// conditioned on it, then walks back with the cached velocities:
/// X~_i = X~_{i+1} - delta_i * v(X^_i, t_i; X^s). Only the reconstruction
/// consumes model evaluations.
ReconInversion recon_invert(const VelocityField& field, const LatentState& source,
                            PriorSampler& noise, const TimeGrid& grid);

/// Same, reconstructing from a given time-0 noise state.
ReconInversion recon_invert(const VelocityField& field, const LatentState& source,
                            const LatentState& noise, const TimeGrid& grid);

/// Backward pass over cached velocities starting from source at t = 1.
std::vector<LatentState> invert_with_cached_velocities(const LatentState& source,
                                                       const Trajectory& reconstruction);

/// | ||X~_0 - X_0|| - ||X^s - X^_1|| |.
double error_identity_gap(const InversionReport& report, const Trajectory& reconstruction,
                          const LatentState& source, const LatentState& true_noise);

}  // namespace flowlab
