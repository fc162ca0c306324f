#pragma once

// Conditioned velocity fields v(x, t; c) with evaluation counting.

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "flowlab/core.hpp"

namespace flowlab {

class SumField;

/// Interface for a conditioned, time-dependent velocity field.
///
/// evaluate() validates its inputs, bumps the evaluation counter by exactly
/// one, then delegates to compute(). The counter is atomic, so concurrent
/// callers sharing a field still get an exact aggregate.
class VelocityField {
 public:
  VelocityField(std::size_t dim, std::size_t condition_dim);
  virtual ~VelocityField() = default;
  VelocityField(const VelocityField&) = delete;
  VelocityField& operator=(const VelocityField&) = delete;

  std::vector<double> evaluate(std::span<const double> x, double t,
                               const Condition& condition) const;
  void evaluate_into(std::span<const double> x, double t, const Condition& condition,
                     std::span<double> out) const;

  std::size_t dim() const { return dim_; }
  std::size_t condition_dim() const { return condition_dim_; }
  std::uint64_t eval_count() const { return count_.load(std::memory_order_relaxed); }

  /// False for model-free fields (v*), whose calls are not NFEs.
  virtual bool counts_toward_nfe() const { return true; }
  virtual std::string kind() const = 0;

 protected:
  /// payload is empty when the condition carries none.
  virtual void compute(std::span<const double> x, double t, std::span<const double> payload,
                       std::span<double> out) const = 0;

 private:
  friend class SumField;

  std::size_t dim_;
  std::size_t condition_dim_;
  mutable std::atomic<std::uint64_t> count_{0};
};

using FieldPtr = std::shared_ptr<const VelocityField>;

class ConstantField final : public VelocityField {
 public:
  ConstantField(std::vector<double> value, std::size_t condition_dim);
  std::string kind() const override { return "constant"; }
  const std::vector<double>& value() const { return value_; }

 protected:
  void compute(std::span<const double> x, double t, std::span<const double> payload,
               std::span<double> out) const override;

 private:
  std::vector<double> value_;
};

/// v*(x, t) = (target - x) / (1 - t). Euler integration of this field lands
/// exactly on target at t = 1 on any grid.
class TargetField final : public VelocityField {
 public:
  TargetField(std::vector<double> target, bool free);
  std::string kind() const override { return "target"; }
  bool counts_toward_nfe() const override { return !free_; }
  const std::vector<double>& target() const { return target_; }

 protected:
  void compute(std::span<const double> x, double t, std::span<const double> payload,
               std::span<double> out) const override;

 private:
  std::vector<double> target_;
  bool free_;
};

/// v(x, t; c) = a(t) x + B c + b0, with a(t) piecewise linear over a_grid.
struct AffineFieldSpec {
  TimeGrid a_grid = TimeGrid::uniform(1);
  std::vector<double> a_values;   // one per a_grid node
  std::size_t dim = 0;
  std::size_t condition_dim = 0;
  std::vector<double> b;          // dim x condition_dim, row-major; empty means B = 0
  std::vector<double> b0;         // dim; empty means zero

  /// Constant a(t) = a, B = 0, b0 = 0.
  static AffineFieldSpec scalar(std::size_t dim, double a);

  void validate() const;
  double a_at(double t) const;
  /// Exact integral of a(s) over [t0, t1].
  double a_integral(double t0, double t1) const;
  /// B c + b0; a zero vector contribution when c is empty.
  std::vector<double> offset(std::span<const double> payload) const;
};

class AffineField final : public VelocityField {
 public:
  explicit AffineField(AffineFieldSpec spec);
  std::string kind() const override { return "affine"; }
  const AffineFieldSpec& spec() const { return spec_; }

 protected:
  void compute(std::span<const double> x, double t, std::span<const double> payload,
               std::span<double> out) const override;

 private:
  AffineFieldSpec spec_;
};

/// Fixed-seed two-layer tanh network on (x, t, payload-or-zeros).
struct SmoothRandomFieldSpec {
  std::uint64_t seed = 0;
  std::size_t hidden_width = 32;
  double gain = 1.0;
  std::size_t dim = 0;
  std::size_t condition_dim = 0;
};

class SmoothRandomField final : public VelocityField {
 public:
  explicit SmoothRandomField(SmoothRandomFieldSpec spec);
  std::string kind() const override { return "smooth_random"; }
  const SmoothRandomFieldSpec& spec() const { return spec_; }

  /// d x d Jacobian in x, row-major. Does not touch the evaluation counter.
  std::vector<double> jacobian(std::span<const double> x, double t,
                               const Condition& condition) const;

 protected:
  void compute(std::span<const double> x, double t, std::span<const double> payload,
               std::span<double> out) const override;

 private:
  std::vector<double> input_vector(std::span<const double> x, double t,
                                   std::span<const double> payload) const;

  SmoothRandomFieldSpec spec_;
  std::size_t input_width_;
  std::vector<double> w1_, b1_, w2_, b2_;
};

/// Pointwise sum of fields sharing dim and condition_dim. One evaluate of the
/// sum is one model call; the terms' own counters are not touched.
class SumField final : public VelocityField {
 public:
  explicit SumField(std::vector<FieldPtr> terms);
  std::string kind() const override { return "sum"; }
  const std::vector<FieldPtr>& terms() const { return terms_; }

 protected:
  void compute(std::span<const double> x, double t, std::span<const double> payload,
               std::span<double> out) const override;

 private:
  std::vector<FieldPtr> terms_;
};

std::shared_ptr<ConstantField> constant_field(std::vector<double> value);
std::shared_ptr<ConstantField> constant_field(std::vector<double> value,
                                              std::size_t condition_dim);
std::shared_ptr<TargetField> deterministic_target_field(std::vector<double> target,
                                                        bool free = true);
std::shared_ptr<AffineField> affine_field(AffineFieldSpec spec);
std::shared_ptr<SmoothRandomField> smooth_random_field(SmoothRandomFieldSpec spec);
std::shared_ptr<SumField> sum_field(std::vector<FieldPtr> terms);

/// pull * (c - x) plus a smooth random perturbation: a curved field whose
/// flow is drawn toward its condition payload.
std::shared_ptr<SumField> guided_field(double pull, const SmoothRandomFieldSpec& perturbation);

}  // namespace flowlab
