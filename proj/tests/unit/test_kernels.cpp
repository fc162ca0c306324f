#include <gtest/gtest.h>

#include <cmath>

#include "flowlab/core.hpp"
#include "flowlab/kernels.hpp"

using namespace flowlab;
using namespace flowlab::kernels;

namespace {

std::vector<double> randoms(std::uint64_t seed, std::size_t n, double scale = 1.0) {
  PriorSampler rng(seed);
  auto v = rng.normals(n);
  for (double& x : v) x *= scale;
  return v;
}

std::vector<double> mask_values(std::uint64_t seed, std::size_t n) {
  auto v = randoms(seed, n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (i % 3 == 0) ? 1.0 : (i % 3 == 1 ? 0.0 : std::abs(std::tanh(v[i])));
  return v;
}

}  // namespace

TEST(Kernels, ScalarAlwaysAvailableAndFirst) {
  const auto tables = available_tables();
  ASSERT_FALSE(tables.empty());
  EXPECT_STREQ(tables.front()->name, "scalar");
  EXPECT_NE(find_table("scalar"), nullptr);
  EXPECT_EQ(find_table("no-such-set"), nullptr);
}

TEST(Kernels, ElementwiseVariantsMatchScalarBitForBit) {
  const KernelTable& ref = scalar_table();
  for (const KernelTable* table : available_tables()) {
    for (std::size_t n = 0; n <= 37; ++n) {
      const auto x = randoms(1 + n, n, 3.0);
      const auto y = randoms(100 + n, n, 5.0);
      const auto m = mask_values(200 + n, n);
      std::vector<double> a(n), b(n);

      ref.add_scaled(a.data(), y.data(), x.data(), 0.37, n);
      table->add_scaled(b.data(), y.data(), x.data(), 0.37, n);
      EXPECT_EQ(a, b) << table->name << " add_scaled n=" << n;

      ref.target_velocity(a.data(), y.data(), x.data(), 0.61, n);
      table->target_velocity(b.data(), y.data(), x.data(), 0.61, n);
      EXPECT_EQ(a, b) << table->name << " target_velocity n=" << n;

      for (double eta : {0.0, 0.3, 1.0}) {
        ref.masked_blend(a.data(), x.data(), y.data(), m.data(), eta, n);
        table->masked_blend(b.data(), x.data(), y.data(), m.data(), eta, n);
        EXPECT_EQ(a, b) << table->name << " masked_blend n=" << n;
      }
    }
  }
}

TEST(Kernels, ReductionVariantsAgreeWithinRounding) {
  const KernelTable& ref = scalar_table();
  for (const KernelTable* table : available_tables()) {
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 16u, 255u, 1000u}) {
      const auto a = randoms(7 + n, n);
      const auto b = randoms(9 + n, n);
      const double sq_ref = ref.sum_sq_diff(a.data(), b.data(), n);
      const double sq = table->sum_sq_diff(a.data(), b.data(), n);
      EXPECT_NEAR(sq, sq_ref, 1e-12 * std::max(1.0, sq_ref)) << table->name;
      const double ab_ref = ref.sum_abs_diff(a.data(), b.data(), n);
      const double ab = table->sum_abs_diff(a.data(), b.data(), n);
      EXPECT_NEAR(ab, ab_ref, 1e-12 * std::max(1.0, ab_ref)) << table->name;
    }
  }
}

TEST(Kernels, DenseVariantsAgreeWithinRounding) {
  const KernelTable& ref = scalar_table();
  for (const KernelTable* table : available_tables()) {
    for (std::size_t cols : {1u, 4u, 7u, 33u, 513u}) {
      const std::size_t rows = 9;
      const auto w = randoms(cols, rows * cols);
      const auto bias = randoms(cols + 1, rows);
      const auto x = randoms(cols + 2, cols);
      std::vector<double> a(rows), b(rows);
      ref.dense(a.data(), w.data(), bias.data(), x.data(), rows, cols);
      table->dense(b.data(), w.data(), bias.data(), x.data(), rows, cols);
      for (std::size_t r = 0; r < rows; ++r) {
        EXPECT_NEAR(a[r], b[r], 1e-12 * std::max(1.0, std::abs(a[r]))) << table->name;
      }
    }
  }
}

TEST(Kernels, ScopedTableRestoresPrevious) {
  const KernelTable* before = &active();
  {
    ScopedTable guard(scalar_table());
    EXPECT_STREQ(active().name, "scalar");
  }
  EXPECT_EQ(&active(), before);
}

TEST(Kernels, TargetVelocityRejectsSingularTime) {
  std::vector<double> out(2), target{1.0, 2.0}, x{0.0, 0.0};
  EXPECT_THROW(target_velocity(out, target, x, 1.0), Error);
  EXPECT_NO_THROW(target_velocity(out, target, x, 1.0 - 1e-9));
}

TEST(Kernels, WrappersCheckLengths) {
  std::vector<double> out(3), a(3), b(2);
  EXPECT_THROW(add_scaled(out, a, b, 1.0), Error);
  EXPECT_THROW(sum_sq_diff(a, b), Error);
}
