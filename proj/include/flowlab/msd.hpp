#pragma once

// Mask-guided selective denoising: inside the mask the model velocity is
// kept; outside it is blended with v* = (source - x) / (1 - t).

#include <span>
#include <vector>

#include "flowlab/core.hpp"
#include "flowlab/fields.hpp"
#include "flowlab/reinversion.hpp"

namespace flowlab {

/// M*v + (1-M)*(eta*v* + (1-eta)*v), elementwise.
std::vector<double> msd_velocity(std::span<const double> model_v, std::span<const double> state,
                                 std::span<const double> source, double t, const Mask& mask,
                                 double eta);

void msd_velocity_into(std::span<const double> model_v, std::span<const double> state,
                       std::span<const double> source, double t, const Mask& mask, double eta,
                       std::span<double> out);

/// ReInversion with the masked blend applied at every stage-2 step.
EditOutcome msd_edit(const VelocityField& field, const LatentState& source,
                     const LatentState& reference, const TimeGrid& grid,
                     const EditConfig& config, const Mask& mask);

}  // namespace flowlab
