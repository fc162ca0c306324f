#include "flowlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace flowlab {

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

GridShape::GridShape(std::size_t r, std::size_t c) : rows(r), cols(c) {
  if (r == 0 || c == 0) {
    throw Error(ErrorKind::InvalidDimension, "grid shape needs rows >= 1 and cols >= 1");
  }
}

LatentState::LatentState(std::vector<double> values, double time,
                         std::optional<GridShape> shape)
    : values_(std::move(values)), time_(time), shape_(shape) {
  if (values_.empty()) {
    throw Error(ErrorKind::InvalidDimension, "state must have at least one value");
  }
  if (!all_finite(values_)) {
    throw Error(ErrorKind::DivergedIntegration, "state contains non-finite values");
  }
  if (!(time_ >= 0.0 && time_ <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "state time must lie in [0, 1]");
  }
  if (shape_ && shape_->size() != values_.size()) {
    throw Error(ErrorKind::InvalidDimension, "state shape does not match its length");
  }
}

LatentState LatentState::at_time(double t) const { return LatentState(values_, t, shape_); }

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.size() < 2) {
    throw Error(ErrorKind::InvalidGrid, "time grid needs at least one step");
  }
  if (times_.front() != 0.0 || times_.back() != 1.0) {
    throw Error(ErrorKind::InvalidGrid, "time grid must start at 0 and end at 1");
  }
  for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
    if (!(times_[i + 1] > times_[i])) {
      throw Error(ErrorKind::InvalidGrid, "time grid must be strictly increasing");
    }
  }
}

TimeGrid TimeGrid::uniform(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidGrid, "uniform grid needs n >= 1");
  std::vector<double> t(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    t[i] = static_cast<double>(i) / static_cast<double>(n);
  }
  return TimeGrid(std::move(t));
}

Mask::Mask(std::vector<double> values, std::optional<GridShape> shape)
    : values_(std::move(values)), shape_(shape) {
  if (values_.empty()) throw Error(ErrorKind::InvalidDimension, "mask must be non-empty");
  for (double m : values_) {
    if (!(m >= 0.0 && m <= 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "mask entries must lie in [0, 1]");
    }
  }
  if (shape_ && shape_->size() != values_.size()) {
    throw Error(ErrorKind::InvalidDimension, "mask shape does not match its length");
  }
}

Mask Mask::ones(std::size_t d, std::optional<GridShape> shape) {
  return Mask(std::vector<double>(d, 1.0), shape);
}

Mask Mask::zeros(std::size_t d, std::optional<GridShape> shape) {
  return Mask(std::vector<double>(d, 0.0), shape);
}

std::size_t Mask::count_ones() const {
  return static_cast<std::size_t>(std::count(values_.begin(), values_.end(), 1.0));
}

const char* to_string(ConditionTag tag) {
  switch (tag) {
    case ConditionTag::None: return "none";
    case ConditionTag::Source: return "source";
    case ConditionTag::Reference: return "reference";
  }
  return "?";
}

Condition::Condition(ConditionTag tag, std::vector<double> payload)
    : tag_(tag), payload_(std::move(payload)) {
  if (payload_.empty()) {
    throw Error(ErrorKind::InvalidDimension, "condition payload must be non-empty");
  }
  if (!all_finite(payload_)) {
    throw Error(ErrorKind::InvalidArgument, "condition payload must be finite");
  }
}

Condition Condition::source(std::vector<double> payload) {
  return Condition(ConditionTag::Source, std::move(payload));
}

Condition Condition::reference(std::vector<double> payload) {
  return Condition(ConditionTag::Reference, std::move(payload));
}

PriorSampler::PriorSampler(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double PriorSampler::next_uniform_open() {
  // 53 random bits, shifted by half an ulp so that 0 is never produced.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double PriorSampler::next_normal() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  const double u1 = next_uniform_open();
  const double u2 = next_uniform_open();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

std::vector<double> PriorSampler::normals(std::size_t count) {
  std::vector<double> out(count);
  for (double& z : out) z = next_normal();
  return out;
}

LatentState sample_prior(PriorSampler& sampler, std::size_t d,
                         std::optional<GridShape> shape) {
  if (d == 0) throw Error(ErrorKind::InvalidDimension, "prior sample needs d >= 1");
  return LatentState(sampler.normals(d), 0.0, shape);
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw Error(ErrorKind::InvalidDimension, msg.str());
  }
}

void require_time(double time, double expected, const char* what) {
  if (std::abs(time - expected) > kTimeMatchTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": state time " << time << " does not match grid node " << expected;
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
}

}  // namespace flowlab
