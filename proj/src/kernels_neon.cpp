#include "flowlab/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

#include <cmath>

namespace flowlab::kernels {

namespace {

constexpr std::size_t kLanes = 2;

void add_scaled_neon(double* out, const double* y, const double* x, double a, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vst1q_f64(out + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) out[i] = y[i] + a * x[i];
}

void target_velocity_neon(double* out, const double* target, const double* x, double t,
                          std::size_t n) {
  const double remaining = 1.0 - t;
  const float64x2_t vr = vdupq_n_f64(remaining);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    vst1q_f64(out + i, vdivq_f64(vsubq_f64(vld1q_f64(target + i), vld1q_f64(x + i)), vr));
  }
  for (; i < n; ++i) out[i] = (target[i] - x[i]) / remaining;
}

void masked_blend_neon(double* out, const double* v, const double* vs, const double* m,
                       double eta, std::size_t n) {
  const double keep = 1.0 - eta;
  const float64x2_t veta = vdupq_n_f64(eta);
  const float64x2_t vkeep = vdupq_n_f64(keep);
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t vv = vld1q_f64(v + i);
    const float64x2_t vm = vld1q_f64(m + i);
    const float64x2_t background =
        vaddq_f64(vmulq_f64(veta, vld1q_f64(vs + i)), vmulq_f64(vkeep, vv));
    vst1q_f64(out + i,
              vaddq_f64(vmulq_f64(vm, vv), vmulq_f64(vsubq_f64(one, vm), background)));
  }
  for (; i < n; ++i) {
    const double background = eta * vs[i] + keep * v[i];
    out[i] = m[i] * v[i] + (1.0 - m[i]) * background;
  }
}

double sum_sq_diff_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vaddq_f64(acc, vmulq_f64(d, d));
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

double sum_abs_diff_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    acc = vaddq_f64(acc, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) total += std::abs(a[i] - b[i]);
  return total;
}

void dense_neon(double* out, const double* w, const double* bias, const double* x,
                std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = w + r * cols;
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t c = 0;
    for (; c + kLanes <= cols; c += kLanes) {
      acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(row + c), vld1q_f64(x + c)));
    }
    double total = vaddvq_f64(acc);
    for (; c < cols; ++c) total += row[c] * x[c];
    out[r] = bias[r] + total;
  }
}

}  // namespace

const KernelTable* neon_table() {
  static const KernelTable table{
      "neon",          add_scaled_neon,  target_velocity_neon, masked_blend_neon,
      sum_sq_diff_neon, sum_abs_diff_neon, dense_neon,
  };
  return &table;
}

}  // namespace flowlab::kernels

#else

namespace flowlab::kernels {
const KernelTable* neon_table() { return nullptr; }
}  // namespace flowlab::kernels

#endif
