#include "flowlab/metrics.hpp"

#include <cmath>

#include "flowlab/kernels.hpp"

namespace flowlab {

double l2(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size(), "l2");
  return std::sqrt(kernels::sum_sq_diff(a, b));
}

double mean_abs(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size(), "mean_abs");
  if (a.empty()) return 0.0;
  return kernels::sum_abs_diff(a, b) / static_cast<double>(a.size());
}

std::vector<CurvePoint> drift_curve(const InversionReport& report, const Trajectory& forward) {
  if (!(report.grid == forward.grid) || forward.from_index != 0 ||
      forward.states.size() != report.intermediate_states.size()) {
    throw Error(ErrorKind::InvalidGrid, "drift curve needs a backward and forward pass on one grid");
  }
  std::vector<CurvePoint> curve;
  curve.reserve(forward.states.size());
  for (std::size_t i = 0; i < forward.states.size(); ++i) {
    curve.push_back({report.grid[i],
                     l2(report.intermediate_states[i].values(), forward.states[i].values())});
  }
  return curve;
}

}  // namespace flowlab
