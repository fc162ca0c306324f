#pragma once

// File formats: the v1 binary state format, 8-bit PGM previews and masks,
// and plot-ready CSV exports.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "flowlab/core.hpp"
#include "flowlab/inversion.hpp"
#include "flowlab/metrics.hpp"
#include "flowlab/solver.hpp"

namespace flowlab::io {

// v1 layout:
//   FLOWLAB v1\n
//   d=<int> rows=<int|0> cols=<int|0> time=<decimal>\n
//   d little-endian IEEE-754 binary64 values
void write_state(std::ostream& out, const LatentState& state);
LatentState read_state(std::istream& in);
void write_state(const std::filesystem::path& path, const LatentState& state);
LatentState read_state(const std::filesystem::path& path);

/// Masks use the v1 layout with time 0.
void write_mask(const std::filesystem::path& path, const Mask& mask);

/// Binary P5 PGM, [min, max] mapped linearly onto [0, 255].
void write_pgm(std::ostream& out, std::span<const double> values, GridShape shape);
void write_pgm(const std::filesystem::path& path, std::span<const double> values, GridShape shape);

/// Reads a v1 file, or a P5 PGM where any pixel > 127 becomes 1.
Mask read_mask(const std::filesystem::path& path);
Mask read_pgm_mask(std::istream& in);

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
void write_velocities_csv(std::ostream& out, const Trajectory& trajectory);
void write_states_csv(std::ostream& out, const std::vector<LatentState>& states);
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve);

}  // namespace flowlab::io
