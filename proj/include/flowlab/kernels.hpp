#pragma once

// Data-parallel inner loops behind a runtime-selected dispatch table.
//
// Every table provides the same operations. Elementwise kernels are
// bit-identical across tables (plain IEEE mul/add/div, no fused multiply-add);
// reductions and dense rows may differ in the last bits because lanes
// accumulate in a different order.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace flowlab::kernels {

struct KernelTable {
  const char* name;
  // out[i] = y[i] + a * x[i]
  void (*add_scaled)(double* out, const double* y, const double* x, double a, std::size_t n);
  // out[i] = (target[i] - x[i]) / (1 - t)
  void (*target_velocity)(double* out, const double* target, const double* x, double t,
                          std::size_t n);
  // out[i] = m[i]*v[i] + (1-m[i]) * (eta*vs[i] + (1-eta)*v[i])
  void (*masked_blend)(double* out, const double* v, const double* vs, const double* m,
                       double eta, std::size_t n);
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
  double (*sum_abs_diff)(const double* a, const double* b, std::size_t n);
  // out[r] = bias[r] + sum_c w[r*cols + c] * x[c]   (row-major w)
  void (*dense)(double* out, const double* w, const double* bias, const double* x,
                std::size_t rows, std::size_t cols);
};

const KernelTable& scalar_table();
/// nullptr when the variant is not compiled in or the CPU lacks support.
const KernelTable* avx2_table();
const KernelTable* neon_table();

/// All tables usable on this machine, scalar first.
std::vector<const KernelTable*> available_tables();

/// Table used by the span wrappers below. Defaults to the widest supported
/// variant; FLOWLAB_KERNELS=scalar|avx2|neon overrides at first use.
const KernelTable& active();
void set_active(const KernelTable& table);
const KernelTable* find_table(std::string_view name);

/// Swaps the active table for the lifetime of the guard.
class ScopedTable {
 public:
  explicit ScopedTable(const KernelTable& table);
  ~ScopedTable();
  ScopedTable(const ScopedTable&) = delete;
  ScopedTable& operator=(const ScopedTable&) = delete;

 private:
  const KernelTable* previous_;
};

void add_scaled(std::span<double> out, std::span<const double> y, std::span<const double> x,
                double a);
void target_velocity(std::span<double> out, std::span<const double> target,
                     std::span<const double> x, double t);
void masked_blend(std::span<double> out, std::span<const double> v, std::span<const double> vs,
                  std::span<const double> mask, double eta);
double sum_sq_diff(std::span<const double> a, std::span<const double> b);
double sum_abs_diff(std::span<const double> a, std::span<const double> b);
void dense(std::span<double> out, std::span<const double> w, std::span<const double> bias,
           std::span<const double> x);

}  // namespace flowlab::kernels
