#include "flowlab/data.hpp"

#include <cmath>
#include <vector>

namespace flowlab {

LatentState make_blob_grid(GridShape shape, GridPoint center, double radius, double amplitude) {
  if (!(center.row >= 0.0 && center.row <= static_cast<double>(shape.rows - 1) &&
        center.col >= 0.0 && center.col <= static_cast<double>(shape.cols - 1))) {
    throw Error(ErrorKind::InvalidArgument, "blob center lies outside the grid");
  }
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "blob radius must be positive");
  if (!std::isfinite(amplitude)) throw Error(ErrorKind::InvalidArgument, "blob amplitude must be finite");

  std::vector<double> values(shape.size());
  const double inv_two_var = 1.0 / (2.0 * radius * radius);
  for (std::size_t r = 0; r < shape.rows; ++r) {
    for (std::size_t c = 0; c < shape.cols; ++c) {
      const double dr = static_cast<double>(r) - center.row;
      const double dc = static_cast<double>(c) - center.col;
      values[r * shape.cols + c] = amplitude * std::exp(-(dr * dr + dc * dc) * inv_two_var);
    }
  }
  return LatentState(std::move(values), 1.0, shape);
}

Mask make_box_mask(GridShape shape, std::size_t top, std::size_t left, std::size_t height,
                   std::size_t width) {
  if (height == 0 || width == 0) throw Error(ErrorKind::InvalidArgument, "mask box has zero area");
  if (top + height > shape.rows || left + width > shape.cols) {
    throw Error(ErrorKind::InvalidArgument, "mask box exceeds the grid");
  }
  std::vector<double> values(shape.size(), 0.0);
  for (std::size_t r = top; r < top + height; ++r) {
    for (std::size_t c = left; c < left + width; ++c) values[r * shape.cols + c] = 1.0;
  }
  return Mask(std::move(values), shape);
}

}  // namespace flowlab
