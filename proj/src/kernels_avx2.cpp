// Compiled with -mavx2 (no -mfma: elementwise results must match scalar).
#include "flowlab/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

#include <cmath>

namespace flowlab::kernels {

namespace {

constexpr std::size_t kLanes = 4;

void add_scaled_avx2(double* out, const double* y, const double* x, double a, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) out[i] = y[i] + a * x[i];
}

void target_velocity_avx2(double* out, const double* target, const double* x, double t,
                          std::size_t n) {
  const double remaining = 1.0 - t;
  const __m256d vr = _mm256_set1_pd(remaining);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(target + i), _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(out + i, _mm256_div_pd(diff, vr));
  }
  for (; i < n; ++i) out[i] = (target[i] - x[i]) / remaining;
}

void masked_blend_avx2(double* out, const double* v, const double* vs, const double* m,
                       double eta, std::size_t n) {
  const double keep = 1.0 - eta;
  const __m256d veta = _mm256_set1_pd(eta);
  const __m256d vkeep = _mm256_set1_pd(keep);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d vv = _mm256_loadu_pd(v + i);
    const __m256d vm = _mm256_loadu_pd(m + i);
    const __m256d background = _mm256_add_pd(_mm256_mul_pd(veta, _mm256_loadu_pd(vs + i)),
                                              _mm256_mul_pd(vkeep, vv));
    const __m256d fg = _mm256_mul_pd(vm, vv);
    const __m256d bg = _mm256_mul_pd(_mm256_sub_pd(one, vm), background);
    _mm256_storeu_pd(out + i, _mm256_add_pd(fg, bg));
  }
  for (; i < n; ++i) {
    const double background = eta * vs[i] + keep * v[i];
    out[i] = m[i] * v[i] + (1.0 - m[i]) * background;
  }
}

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

double sum_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign, d));
  }
  double total = hsum(acc);
  for (; i < n; ++i) total += std::abs(a[i] - b[i]);
  return total;
}

void dense_avx2(double* out, const double* w, const double* bias, const double* x,
                std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = w + r * cols;
    __m256d acc = _mm256_setzero_pd();
    std::size_t c = 0;
    for (; c + kLanes <= cols; c += kLanes) {
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(x + c)));
    }
    double total = hsum(acc);
    for (; c < cols; ++c) total += row[c] * x[c];
    out[r] = bias[r] + total;
  }
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{
      "avx2",          add_scaled_avx2,  target_velocity_avx2, masked_blend_avx2,
      sum_sq_diff_avx2, sum_abs_diff_avx2, dense_avx2,
  };
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
}

}  // namespace flowlab::kernels

#else

namespace flowlab::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace flowlab::kernels

#endif
