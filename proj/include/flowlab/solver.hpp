#pragma once

// Forward Euler integration of conditioned flows, plus verification oracles.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "flowlab/core.hpp"
#include "flowlab/fields.hpp"

namespace flowlab {

/// States at grid nodes from_index..to_index and the velocity used for each
/// step: states[k+1] = states[k] + delta(from_index + k) * velocities[k].
struct Trajectory {
  TimeGrid grid;
  std::size_t from_index = 0;
  std::vector<LatentState> states;
  std::vector<std::vector<double>> velocities;
  /// Conditioning tag in effect for each step.
  std::vector<ConditionTag> step_conditions;
  /// Calls made to fields that count toward NFE.
  std::size_t model_evaluations = 0;

  std::size_t to_index() const { return from_index + velocities.size(); }
  const LatentState& final_state() const { return states.back(); }

  /// Appends a trajectory that starts where this one ends.
  void append(const Trajectory& next);
};

/// Velocity used for one Euler step: write v(x, t_i) into out.
using StepVelocity =
    std::function<void(std::span<const double> x, double t, std::size_t step, std::span<double> out)>;

/// Generic Euler loop over grid steps [from_index, to_index).
/// Throws DivergedIntegration naming the step when a velocity is non-finite.
Trajectory euler_integrate(const LatentState& start, const TimeGrid& grid, std::size_t from_index,
                           std::size_t to_index, const StepVelocity& velocity);

Trajectory euler_sample(const VelocityField& field, const LatentState& start,
                        const TimeGrid& grid, const Condition& condition);

Trajectory euler_sample_partial(const VelocityField& field, const LatentState& start,
                                const TimeGrid& grid, const Condition& condition,
                                std::size_t from_index, std::size_t to_index);

/// Max abs deviation between stored states and a replay of the cached
/// velocities through the Euler recursion.
double replay_deviation(const Trajectory& trajectory);

enum class OracleMode { Auto, RefinedEuler };

/// High-accuracy terminal state at t = 1 from start.time. Auto uses the
/// closed form for affine fields and refinement * 1024 uniform Euler steps
/// otherwise.
LatentState oracle_solve(const VelocityField& field, const LatentState& start,
                         const Condition& condition, std::size_t refinement,
                         OracleMode mode = OracleMode::Auto);

/// Exact flow of dx/dt = a(t) x + B c + b0 from t_from to t_to.
LatentState closed_form_affine_solve(const AffineFieldSpec& spec, const LatentState& start,
                                     const Condition& condition, double t_from, double t_to);

}  // namespace flowlab
