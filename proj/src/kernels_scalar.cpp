#include "flowlab/kernels.hpp"

#include <cmath>

namespace flowlab::kernels {

namespace {

void add_scaled_scalar(double* out, const double* y, const double* x, double a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i] + a * x[i];
}

void target_velocity_scalar(double* out, const double* target, const double* x, double t,
                            std::size_t n) {
  const double remaining = 1.0 - t;
  for (std::size_t i = 0; i < n; ++i) out[i] = (target[i] - x[i]) / remaining;
}

void masked_blend_scalar(double* out, const double* v, const double* vs, const double* m,
                         double eta, std::size_t n) {
  const double keep = 1.0 - eta;
  for (std::size_t i = 0; i < n; ++i) {
    const double background = eta * vs[i] + keep * v[i];
    out[i] = m[i] * v[i] + (1.0 - m[i]) * background;
  }
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double sum_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::abs(a[i] - b[i]);
  return acc;
}

void dense_scalar(double* out, const double* w, const double* bias, const double* x,
                  std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = w + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
    out[r] = bias[r] + acc;
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{
      "scalar",          add_scaled_scalar,  target_velocity_scalar, masked_blend_scalar,
      sum_sq_diff_scalar, sum_abs_diff_scalar, dense_scalar,
  };
  return table;
}

}  // namespace flowlab::kernels
