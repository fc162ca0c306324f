#include "flowlab/fields.hpp"

#include <algorithm>
#include <cmath>

#include "flowlab/kernels.hpp"

namespace flowlab {

VelocityField::VelocityField(std::size_t dim, std::size_t condition_dim)
    : dim_(dim), condition_dim_(condition_dim) {
  if (dim == 0) throw Error(ErrorKind::InvalidDimension, "field dimension must be >= 1");
}

std::vector<double> VelocityField::evaluate(std::span<const double> x, double t,
                                            const Condition& condition) const {
  std::vector<double> out(dim_);
  evaluate_into(x, t, condition, out);
  return out;
}

void VelocityField::evaluate_into(std::span<const double> x, double t,
                                  const Condition& condition, std::span<double> out) const {
  require_same_dim(x.size(), dim_, "field input");
  require_same_dim(out.size(), dim_, "field output");
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "field evaluated at negative time");
  if (t >= 1.0 - kTimeMatchTol) {
    throw Error(ErrorKind::SingularTime, "fields are not evaluated at t = 1");
  }
  if (condition.has_payload()) {
    require_same_dim(condition.payload().size(), condition_dim_, "condition payload");
  }
  count_.fetch_add(1, std::memory_order_relaxed);
  compute(x, t, condition.payload(), out);
}

ConstantField::ConstantField(std::vector<double> value, std::size_t condition_dim)
    : VelocityField(value.size(), condition_dim), value_(std::move(value)) {
  for (double v : value_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "constant field must be finite");
  }
}

void ConstantField::compute(std::span<const double>, double, std::span<const double>,
                            std::span<double> out) const {
  std::copy(value_.begin(), value_.end(), out.begin());
}

TargetField::TargetField(std::vector<double> target, bool free)
    : VelocityField(target.size(), target.size()), target_(std::move(target)), free_(free) {
  for (double v : target_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "target must be finite");
  }
}

void TargetField::compute(std::span<const double> x, double t, std::span<const double>,
                          std::span<double> out) const {
  kernels::target_velocity(out, target_, x, t);
}

AffineFieldSpec AffineFieldSpec::scalar(std::size_t dim, double a) {
  AffineFieldSpec spec;
  spec.a_values = {a, a};
  spec.dim = dim;
  spec.condition_dim = dim;
  return spec;
}

void AffineFieldSpec::validate() const {
  if (dim == 0) throw Error(ErrorKind::InvalidDimension, "affine field needs dim >= 1");
  require_same_dim(a_values.size(), a_grid.times().size(), "affine a(t) table");
  if (!b.empty()) require_same_dim(b.size(), dim * condition_dim, "affine B matrix");
  if (!b0.empty()) require_same_dim(b0.size(), dim, "affine b0");
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(a_values) || !finite(b) || !finite(b0)) {
    throw Error(ErrorKind::InvalidArgument, "affine coefficients must be finite");
  }
}

namespace {

// Index of the a_grid segment containing t (last segment for t = 1).
std::size_t segment_of(const TimeGrid& grid, double t) {
  const auto& times = grid.times();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t idx = static_cast<std::size_t>(std::distance(times.begin(), it));
  idx = idx == 0 ? 0 : idx - 1;
  return std::min(idx, grid.steps() - 1);
}

}  // namespace

double AffineFieldSpec::a_at(double t) const {
  const std::size_t s = segment_of(a_grid, t);
  const double t0 = a_grid[s];
  const double t1 = a_grid[s + 1];
  const double w = (t - t0) / (t1 - t0);
  return a_values[s] + w * (a_values[s + 1] - a_values[s]);
}

double AffineFieldSpec::a_integral(double t0, double t1) const {
  if (t1 < t0) return -a_integral(t1, t0);
  double total = 0.0;
  for (std::size_t s = 0; s < a_grid.steps(); ++s) {
    const double lo = std::max(t0, a_grid[s]);
    const double hi = std::min(t1, a_grid[s + 1]);
    if (hi <= lo) continue;
    // trapezoid is exact for a linear integrand
    total += 0.5 * (hi - lo) * (a_at(lo) + a_at(hi));
  }
  return total;
}

std::vector<double> AffineFieldSpec::offset(std::span<const double> payload) const {
  std::vector<double> k = b0.empty() ? std::vector<double>(dim, 0.0) : b0;
  if (!b.empty() && !payload.empty()) {
    std::vector<double> bc(dim);
    kernels::dense(bc, b, k, payload);
    k = std::move(bc);
  }
  return k;
}

AffineField::AffineField(AffineFieldSpec spec)
    : VelocityField(spec.dim, spec.condition_dim), spec_(std::move(spec)) {
  spec_.validate();
}

void AffineField::compute(std::span<const double> x, double t, std::span<const double> payload,
                          std::span<double> out) const {
  const std::vector<double> k = spec_.offset(payload);
  kernels::add_scaled(out, k, x, spec_.a_at(t));
}

SmoothRandomField::SmoothRandomField(SmoothRandomFieldSpec spec)
    : VelocityField(spec.dim, spec.condition_dim),
      spec_(spec),
      input_width_(spec.dim + 1 + spec.condition_dim) {
  if (spec_.hidden_width == 0) {
    throw Error(ErrorKind::InvalidDimension, "smooth random field needs hidden_width >= 1");
  }
  if (!std::isfinite(spec_.gain)) throw Error(ErrorKind::InvalidArgument, "gain must be finite");
  PriorSampler rng(spec_.seed);
  const double in_scale = 1.0 / std::sqrt(static_cast<double>(input_width_));
  const double hidden_scale = 1.0 / std::sqrt(static_cast<double>(spec_.hidden_width));
  auto draw = [&rng](std::size_t n, double scale) {
    std::vector<double> v = rng.normals(n);
    for (double& w : v) w *= scale;
    return v;
  };
  w1_ = draw(spec_.hidden_width * input_width_, in_scale);
  b1_ = draw(spec_.hidden_width, 0.5);
  w2_ = draw(spec_.dim * spec_.hidden_width, hidden_scale);
  b2_ = draw(spec_.dim, 0.5);
}

std::vector<double> SmoothRandomField::input_vector(std::span<const double> x, double t,
                                                    std::span<const double> payload) const {
  std::vector<double> z(input_width_, 0.0);
  std::copy(x.begin(), x.end(), z.begin());
  z[spec_.dim] = t;
  std::copy(payload.begin(), payload.end(), z.begin() + static_cast<std::ptrdiff_t>(spec_.dim + 1));
  return z;
}

void SmoothRandomField::compute(std::span<const double> x, double t,
                                std::span<const double> payload, std::span<double> out) const {
  const std::vector<double> z = input_vector(x, t, payload);
  std::vector<double> hidden(spec_.hidden_width);
  kernels::dense(hidden, w1_, b1_, z);
  for (double& h : hidden) h = std::tanh(h);
  kernels::dense(out, w2_, b2_, hidden);
  for (double& v : out) v *= spec_.gain;
}

std::vector<double> SmoothRandomField::jacobian(std::span<const double> x, double t,
                                                const Condition& condition) const {
  require_same_dim(x.size(), spec_.dim, "jacobian input");
  const std::vector<double> z = input_vector(x, t, condition.payload());
  std::vector<double> hidden(spec_.hidden_width);
  kernels::dense(hidden, w1_, b1_, z);
  std::vector<double> slope(spec_.hidden_width);
  for (std::size_t h = 0; h < hidden.size(); ++h) {
    const double th = std::tanh(hidden[h]);
    slope[h] = 1.0 - th * th;
  }
  const std::size_t d = spec_.dim;
  std::vector<double> jac(d * d, 0.0);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t h = 0; h < spec_.hidden_width; ++h) {
      const double coeff = spec_.gain * w2_[r * spec_.hidden_width + h] * slope[h];
      const double* w1_row = &w1_[h * input_width_];
      for (std::size_t c = 0; c < d; ++c) jac[r * d + c] += coeff * w1_row[c];
    }
  }
  return jac;
}

SumField::SumField(std::vector<FieldPtr> terms)
    : VelocityField(terms.empty() ? 0 : terms.front()->dim(),
                    terms.empty() ? 0 : terms.front()->condition_dim()),
      terms_(std::move(terms)) {
  for (const FieldPtr& term : terms_) {
    require_same_dim(term->dim(), dim(), "sum field term");
    require_same_dim(term->condition_dim(), condition_dim(), "sum field term condition");
  }
}

void SumField::compute(std::span<const double> x, double t, std::span<const double> payload,
                       std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  std::vector<double> part(dim());
  for (const FieldPtr& term : terms_) {
    term->compute(x, t, payload, part);
    kernels::add_scaled(out, out, part, 1.0);
  }
}

std::shared_ptr<ConstantField> constant_field(std::vector<double> value) {
  const std::size_t d = value.size();
  return std::make_shared<ConstantField>(std::move(value), d);
}

std::shared_ptr<ConstantField> constant_field(std::vector<double> value,
                                              std::size_t condition_dim) {
  return std::make_shared<ConstantField>(std::move(value), condition_dim);
}

std::shared_ptr<TargetField> deterministic_target_field(std::vector<double> target, bool free) {
  return std::make_shared<TargetField>(std::move(target), free);
}

std::shared_ptr<AffineField> affine_field(AffineFieldSpec spec) {
  return std::make_shared<AffineField>(std::move(spec));
}

std::shared_ptr<SmoothRandomField> smooth_random_field(SmoothRandomFieldSpec spec) {
  return std::make_shared<SmoothRandomField>(spec);
}

std::shared_ptr<SumField> sum_field(std::vector<FieldPtr> terms) {
  if (terms.empty()) throw Error(ErrorKind::InvalidArgument, "sum field needs at least one term");
  return std::make_shared<SumField>(std::move(terms));
}

std::shared_ptr<SumField> guided_field(double pull, const SmoothRandomFieldSpec& perturbation) {
  AffineFieldSpec attract = AffineFieldSpec::scalar(perturbation.dim, -pull);
  attract.condition_dim = perturbation.condition_dim;
  require_same_dim(perturbation.dim, perturbation.condition_dim, "guided field");
  attract.b.assign(perturbation.dim * perturbation.dim, 0.0);
  for (std::size_t i = 0; i < perturbation.dim; ++i) attract.b[i * perturbation.dim + i] = pull;
  return sum_field({affine_field(std::move(attract)), smooth_random_field(perturbation)});
}

}  // namespace flowlab
