#pragma once

// Synthetic sources, references and masks on small grayscale grids.

#include <cstddef>

#include "flowlab/core.hpp"

namespace flowlab {

struct GridPoint {
  double row;
  double col;
};

/// Gaussian bump amplitude * exp(-r^2 / (2 radius^2)) on a zero background,
/// stamped at t = 1.
LatentState make_blob_grid(GridShape shape, GridPoint center, double radius, double amplitude);

/// Ones inside [top, top+height) x [left, left+width), zeros elsewhere.
Mask make_box_mask(GridShape shape, std::size_t top, std::size_t left, std::size_t height,
                   std::size_t width);

}  // namespace flowlab
