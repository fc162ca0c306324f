#pragma once

// Shared domain types for flowlab: states, time grids, masks, conditions
// and the seeded prior sampler.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowlab {

/// Error categories. The CLI maps these onto its stable exit codes.
enum class ErrorKind {
  InvalidArgument,
  InvalidDimension,
  InvalidGrid,
  SingularTime,
  SingularInversion,
  DivergedIntegration,
  Capability,
  DegenerateSplit,
  Config,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Tolerance used when matching a state's time against a grid node.
inline constexpr double kTimeMatchTol = 1e-12;

struct GridShape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  GridShape() = default;
  GridShape(std::size_t r, std::size_t c);
  std::size_t size() const { return rows * cols; }
  bool operator==(const GridShape&) const = default;
};

/// One point on a flow trajectory.
class LatentState {
 public:
  LatentState(std::vector<double> values, double time,
              std::optional<GridShape> shape = std::nullopt);

  std::span<const double> values() const { return values_; }
  const std::vector<double>& vec() const { return values_; }
  double time() const { return time_; }
  const std::optional<GridShape>& shape() const { return shape_; }
  std::size_t dim() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Same values, different time stamp.
  LatentState at_time(double t) const;

  bool operator==(const LatentState&) const = default;

 private:
  std::vector<double> values_;
  double time_;
  std::optional<GridShape> shape_;
};

/// Discretisation t_0 = 0 < t_1 < ... < t_n = 1.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> times);

  static TimeGrid uniform(std::size_t n);

  std::size_t steps() const { return times_.size() - 1; }
  double operator[](std::size_t i) const { return times_[i]; }
  double delta(std::size_t i) const { return times_[i + 1] - times_[i]; }
  const std::vector<double>& times() const { return times_; }

  bool operator==(const TimeGrid&) const = default;

 private:
  std::vector<double> times_;
};

inline TimeGrid uniform_grid(std::size_t n) { return TimeGrid::uniform(n); }

class Mask {
 public:
  explicit Mask(std::vector<double> values,
                std::optional<GridShape> shape = std::nullopt);

  static Mask ones(std::size_t d, std::optional<GridShape> shape = std::nullopt);
  static Mask zeros(std::size_t d, std::optional<GridShape> shape = std::nullopt);

  std::span<const double> values() const { return values_; }
  std::size_t dim() const { return values_.size(); }
  const std::optional<GridShape>& shape() const { return shape_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t count_ones() const;

 private:
  std::vector<double> values_;
  std::optional<GridShape> shape_;
};

enum class ConditionTag { None, Source, Reference };

const char* to_string(ConditionTag tag);

/// Conditioning input of a velocity field. The payload is present iff the
/// tag is not None.
class Condition {
 public:
  Condition() = default;

  static Condition none() { return {}; }
  static Condition source(std::vector<double> payload);
  static Condition reference(std::vector<double> payload);

  ConditionTag tag() const { return tag_; }
  bool has_payload() const { return tag_ != ConditionTag::None; }
  std::span<const double> payload() const { return payload_; }

  bool operator==(const Condition&) const = default;

 private:
  Condition(ConditionTag tag, std::vector<double> payload);

  ConditionTag tag_ = ConditionTag::None;
  std::vector<double> payload_;
};

/// Seeded standard-normal stream: mt19937_64 words fed through an explicit
/// Box-Muller transform. Both halves are fully specified, so streams are
/// reproducible across standard libraries.
class PriorSampler {
 public:
  static constexpr const char* kGeneratorId = "mt19937_64/box-muller/v1";

  explicit PriorSampler(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  double next_normal();
  std::vector<double> normals(std::size_t count);

 private:
  double next_uniform_open();  // (0, 1)

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Draw a time-0 state of dimension d from the standard normal prior.
LatentState sample_prior(PriorSampler& sampler, std::size_t d,
                         std::optional<GridShape> shape = std::nullopt);

/// Throws InvalidDimension unless a and b have the same length.
void require_same_dim(std::size_t a, std::size_t b, const char* what);

/// Throws InvalidArgument unless |time - expected| <= kTimeMatchTol.
void require_time(double time, double expected, const char* what);

}  // namespace flowlab
