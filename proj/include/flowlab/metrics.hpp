#pragma once

#include <span>
#include <vector>

#include "flowlab/inversion.hpp"
#include "flowlab/solver.hpp"

namespace flowlab {

/// Euclidean distance.
double l2(std::span<const double> a, std::span<const double> b);

/// Mean absolute per-coordinate deviation.
double mean_abs(std::span<const double> a, std::span<const double> b);

struct CurvePoint {
  double t;
  double value;
};

/// Per-node L2 distance between backward states and the forward states at
/// the same grid nodes, ordered by t.
std::vector<CurvePoint> drift_curve(const InversionReport& report, const Trajectory& forward);

}  // namespace flowlab
