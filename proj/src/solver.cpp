#include "flowlab/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "flowlab/kernels.hpp"

namespace flowlab {

void Trajectory::append(const Trajectory& next) {
  if (!(next.grid == grid) || next.from_index != to_index()) {
    throw Error(ErrorKind::InvalidArgument, "appended trajectory does not continue this one");
  }
  states.insert(states.end(), next.states.begin() + 1, next.states.end());
  velocities.insert(velocities.end(), next.velocities.begin(), next.velocities.end());
  step_conditions.insert(step_conditions.end(), next.step_conditions.begin(),
                         next.step_conditions.end());
  model_evaluations += next.model_evaluations;
}

Trajectory euler_integrate(const LatentState& start, const TimeGrid& grid, std::size_t from_index,
                           std::size_t to_index, const StepVelocity& velocity) {
  if (!(from_index < to_index && to_index <= grid.steps())) {
    std::ostringstream msg;
    msg << "invalid step range [" << from_index << ", " << to_index << ") on a " << grid.steps()
        << "-step grid";
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  require_time(start.time(), grid[from_index], "euler start");

  Trajectory traj{grid, from_index, {}, {}, {}, 0};
  traj.states.reserve(to_index - from_index + 1);
  traj.velocities.reserve(to_index - from_index);
  traj.states.push_back(start.at_time(grid[from_index]));

  const std::size_t d = start.dim();
  std::vector<double> next(d);
  for (std::size_t i = from_index; i < to_index; ++i) {
    const LatentState& current = traj.states.back();
    std::vector<double> v(d);
    velocity(current.values(), grid[i], i, v);
    if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); })) {
      throw Error(ErrorKind::DivergedIntegration,
                  "non-finite velocity at step " + std::to_string(i));
    }
    kernels::add_scaled(next, current.values(), v, grid.delta(i));
    if (!std::all_of(next.begin(), next.end(), [](double x) { return std::isfinite(x); })) {
      throw Error(ErrorKind::DivergedIntegration, "state diverged at step " + std::to_string(i));
    }
    traj.states.emplace_back(next, grid[i + 1], start.shape());
    traj.velocities.push_back(std::move(v));
  }
  return traj;
}

Trajectory euler_sample_partial(const VelocityField& field, const LatentState& start,
                                const TimeGrid& grid, const Condition& condition,
                                std::size_t from_index, std::size_t to_index) {
  require_same_dim(start.dim(), field.dim(), "euler_sample");
  Trajectory traj = euler_integrate(
      start, grid, from_index, to_index,
      [&](std::span<const double> x, double t, std::size_t, std::span<double> out) {
        field.evaluate_into(x, t, condition, out);
      });
  traj.step_conditions.assign(traj.velocities.size(), condition.tag());
  if (field.counts_toward_nfe()) traj.model_evaluations = traj.velocities.size();
  return traj;
}

Trajectory euler_sample(const VelocityField& field, const LatentState& start,
                        const TimeGrid& grid, const Condition& condition) {
  return euler_sample_partial(field, start, grid, condition, 0, grid.steps());
}

double replay_deviation(const Trajectory& trajectory) {
  double worst = 0.0;
  std::vector<double> x(trajectory.states.front().vec());
  for (std::size_t k = 0; k < trajectory.velocities.size(); ++k) {
    kernels::add_scaled(x, x, trajectory.velocities[k],
                        trajectory.grid.delta(trajectory.from_index + k));
    const auto& stored = trajectory.states[k + 1].vec();
    for (std::size_t j = 0; j < x.size(); ++j) worst = std::max(worst, std::abs(x[j] - stored[j]));
  }
  return worst;
}

LatentState oracle_solve(const VelocityField& field, const LatentState& start,
                         const Condition& condition, std::size_t refinement, OracleMode mode) {
  if (refinement == 0) throw Error(ErrorKind::InvalidArgument, "oracle refinement must be >= 1");
  require_same_dim(start.dim(), field.dim(), "oracle_solve");
  if (mode == OracleMode::Auto) {
    if (const auto* affine = dynamic_cast<const AffineField*>(&field)) {
      return closed_form_affine_solve(affine->spec(), start, condition, start.time(), 1.0);
    }
  }
  const std::size_t steps = refinement * 1024;
  const double t0 = start.time();
  const double h = (1.0 - t0) / static_cast<double>(steps);
  std::vector<double> x(start.vec());
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < steps; ++i) {
    field.evaluate_into(x, t0 + static_cast<double>(i) * h, condition, v);
    kernels::add_scaled(x, x, v, h);
  }
  return LatentState(std::move(x), 1.0, start.shape());
}

namespace {

constexpr std::size_t kGaussPoints = 12;
constexpr std::size_t kQuadraturePanels = 16;

struct GaussRule {
  std::array<double, kGaussPoints> nodes{};
  std::array<double, kGaussPoints> weights{};
};

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
GaussRule make_gauss_rule() {
  GaussRule rule;
  constexpr std::size_t n = kGaussPoints;
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& gauss_rule() {
  static const GaussRule rule = make_gauss_rule();
  return rule;
}

// Integral over [lo, hi] of exp(int_s^hi a), with a linear on [lo, hi].
double forcing_weight(const AffineFieldSpec& spec, double lo, double hi) {
  const double a_lo = spec.a_at(lo);
  const double a_hi = spec.a_at(hi);
  const double width = hi - lo;
  if (a_lo == a_hi) {
    if (a_lo == 0.0) return width;
    return std::expm1(a_lo * width) / a_lo;
  }
  const GaussRule& rule = gauss_rule();
  const double panel = width / static_cast<double>(kQuadraturePanels);
  double total = 0.0;
  for (std::size_t p = 0; p < kQuadraturePanels; ++p) {
    const double mid = lo + (static_cast<double>(p) + 0.5) * panel;
    for (std::size_t q = 0; q < kGaussPoints; ++q) {
      const double s = mid + 0.5 * panel * rule.nodes[q];
      total += rule.weights[q] * std::exp(spec.a_integral(s, hi));
    }
  }
  return total * 0.5 * panel;
}

}  // namespace

LatentState closed_form_affine_solve(const AffineFieldSpec& spec, const LatentState& start,
                                     const Condition& condition, double t_from, double t_to) {
  spec.validate();
  if (!(0.0 <= t_from && t_from <= t_to && t_to <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "closed-form solve needs 0 <= t_from <= t_to <= 1");
  }
  require_same_dim(start.dim(), spec.dim, "closed_form_affine_solve");
  require_time(start.time(), t_from, "closed_form_affine_solve");
  if (condition.has_payload()) {
    require_same_dim(condition.payload().size(), spec.condition_dim, "condition payload");
  }
  const std::vector<double> k = spec.offset(condition.payload());
  std::vector<double> x(start.vec());

  // Break points: a_grid nodes strictly inside (t_from, t_to).
  std::vector<double> cuts{t_from};
  for (double node : spec.a_grid.times()) {
    if (node > t_from && node < t_to) cuts.push_back(node);
  }
  cuts.push_back(t_to);

  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = cuts[s];
    const double hi = cuts[s + 1];
    if (hi <= lo) continue;
    const double growth = std::exp(spec.a_integral(lo, hi));
    const double forcing = forcing_weight(spec, lo, hi);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = growth * x[j] + forcing * k[j];
  }
  return LatentState(std::move(x), t_to, start.shape());
}

}  // namespace flowlab
