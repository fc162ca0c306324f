#include "flowlab/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include "flowlab/commands.hpp"
#include "flowlab/data.hpp"
#include "flowlab/inversion.hpp"
#include "flowlab/metrics.hpp"
#include "flowlab/msd.hpp"
#include "flowlab/reinversion.hpp"
#include "flowlab/solver.hpp"

namespace flowlab::verify {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

double norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

LatentState random_state(std::uint64_t seed, std::size_t d, double time,
                         std::optional<GridShape> shape = std::nullopt) {
  PriorSampler rng(seed);
  return LatentState(rng.normals(d), time, shape);
}

// Fixture shared by the MSD and ablation checks: a source blob and a
// reference blob at a different place and amplitude on a 16x16 grid, edited
// through the guided field.
struct GridFixture {
  GridShape shape;
  LatentState source;
  LatentState reference;
  Mask mask;
  FieldPtr field;
  std::uint64_t seed;
};

std::vector<GridFixture> grid_fixtures() {
  const GridShape shape(16, 16);
  auto make = [&](GridPoint src_c, double src_amp, GridPoint ref_c, double ref_amp,
                  std::size_t top, std::size_t left, std::size_t h, std::size_t w,
                  std::uint64_t field_seed, std::uint64_t seed) {
    SmoothRandomFieldSpec perturb{field_seed, 32, 0.5, shape.size(), shape.size()};
    return GridFixture{shape,
                       make_blob_grid(shape, src_c, 3.0, src_amp),
                       make_blob_grid(shape, ref_c, 2.5, ref_amp),
                       make_box_mask(shape, top, left, h, w),
                       guided_field(3.0, perturb),
                       seed};
  };
  return {
      make({7.5, 7.5}, 1.0, {5.0, 9.0}, -1.5, 3, 3, 8, 8, 11, 101),
      make({4.0, 4.0}, 2.0, {11.0, 11.0}, 1.0, 8, 8, 7, 7, 12, 202),
      make({8.0, 3.0}, -1.0, {8.0, 12.0}, 2.0, 2, 6, 12, 8, 13, 303),
  };
}

using Suite = std::function<std::vector<CheckResult>()>;

CheckResult result(const char* suite, int criterion, std::string name, bool ok, std::string detail) {
  return {suite, criterion, std::move(name), ok, std::move(detail)};
}

// 1: ||X~_0 - X_0|| = ||X^s - X^_1|| over 100 seeded runs.
std::vector<CheckResult> identity_suite() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  double worst = 0.0;
  bool norms_positive = true;
  int runs = 0;
  for (std::size_t d : {std::size_t{2}, std::size_t{256}}) {
    for (std::size_t n : {std::size_t{4}, std::size_t{18}}) {
      const TimeGrid grid = TimeGrid::uniform(n);
      for (std::uint64_t s = 0; s < 25; ++s) {
        const auto field = smooth_random_field({1000 + s, 32, 1.0, d, d});
        const LatentState source = random_state(5000 + s, d, 1.0);
        PriorSampler noise(s);
        const ReconInversion r = recon_invert(*field, source, noise, grid);
        const double gap = error_identity_gap(r.report, r.reconstruction, source, r.true_noise);
        const double bound = 1e-9 * std::max(1.0, norm(source.values()));
        worst = std::max(worst, gap / bound);
        ok = ok && gap <= bound;
        norms_positive =
            norms_positive && l2(source.values(), r.reconstruction.final_state().values()) > 0.0;
        ++runs;
      }
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {
      result("identity", 1, "inversion error equals reconstruction error (100 runs)", ok && runs == 100,
             "worst gap / bound = " + fmt(worst)),
      result("identity", 1, "reconstruction error strictly positive (non-trivial identity)",
             norms_positive, ""),
      result("identity", 1, "identity runs finish in < 10 s", seconds < 10.0, fmt(seconds) + " s"),
  };
}

// 2: NFE counts 36 / 18 / 14 at n = 18, t_tau = 0.2.
std::vector<CheckResult> nfe_suite() {
  const std::size_t d = 16;
  const TimeGrid grid = TimeGrid::uniform(18);
  const LatentState source = random_state(1, d, 1.0);
  const LatentState reference = random_state(2, d, 1.0);
  EditConfig cfg{0.2, 1.0, false, 7};

  auto counted = [&](auto&& run) {
    const auto field = smooth_random_field({3, 16, 1.0, d, d});
    const EditOutcome o = run(*field);
    return std::pair<std::size_t, std::uint64_t>{o.nfe, field->eval_count()};
  };
  const auto recon = counted([&](const VelocityField& f) {
    return recon_inv_edit(f, source, reference, grid, cfg);
  });
  const auto reinv = counted([&](const VelocityField& f) {
    return reinversion_edit(f, source, reference, grid, cfg);
  });
  EditConfig det = cfg;
  det.deterministic_stage1 = true;
  const auto star = counted([&](const VelocityField& f) {
    return reinversion_edit(f, source, reference, grid, det);
  });
  auto line = [](std::pair<std::size_t, std::uint64_t> p) {
    return "reported " + std::to_string(p.first) + ", counter " + std::to_string(p.second);
  };
  return {
      result("nfe", 2, "Recon-Inv pipeline uses 36 model evaluations",
             recon.first == 36 && recon.second == 36, line(recon)),
      result("nfe", 2, "ReInversion uses 18 model evaluations", reinv.first == 18 && reinv.second == 18,
             line(reinv)),
      result("nfe", 2, "ReInversion* uses 14 model evaluations", star.first == 14 && star.second == 14,
             line(star)),
  };
}

// 3 + 4: exact landing of v* and background preservation under MSD.
std::vector<CheckResult> msd_suite() {
  std::vector<CheckResult> out;
  {
    bool ok = true;
    double worst = 0.0;
    for (std::size_t n : {std::size_t{4}, std::size_t{18}, std::size_t{50}}) {
      const TimeGrid grid = TimeGrid::uniform(n);
      const std::size_t tau = transition_index(grid, 0.2);
      const LatentState target = random_state(900 + n, 16, 1.0);
      const auto vstar = deterministic_target_field(target.vec());
      for (std::uint64_t s = 0; s < 50; ++s) {
        PriorSampler rng(10'000 + 100 * n + s);
        std::vector<double> x = rng.normals(16);
        for (double& v : x) v *= 3.0;
        const LatentState start(std::move(x), grid[tau]);
        const Trajectory traj =
            euler_sample_partial(*vstar, start, grid, Condition::none(), tau, n);
        const double err = l2(traj.final_state().values(), target.values());
        const double bound = 1e-9 * std::max(1.0, norm(target.values()));
        worst = std::max(worst, err / bound);
        ok = ok && err <= bound;
      }
    }
    out.push_back(result("msd", 3, "v* integration lands on the source (n = 4, 18, 50; 50 states)", ok,
                         "worst error / bound = " + fmt(worst)));
  }

  const TimeGrid grid = TimeGrid::uniform(18);
  bool background_ok = true;
  bool foreground_moves = true;
  bool ones_identical = true;
  bool eta0_identical = true;
  double worst_bg = 0.0;
  double min_fg = 1e300;
  for (const GridFixture& fx : grid_fixtures()) {
    EditConfig cfg{0.2, 1.0, false, fx.seed};
    const EditOutcome edit = msd_edit(*fx.field, fx.source, fx.reference, grid, cfg, fx.mask);
    double fg = 0.0;
    for (std::size_t j = 0; j < fx.source.dim(); ++j) {
      const double diff = std::abs(edit.edited[j] - fx.source[j]);
      if (fx.mask[j] == 0.0) {
        const double bound = 1e-9 * std::max(1.0, std::abs(fx.source[j]));
        worst_bg = std::max(worst_bg, diff / bound);
        background_ok = background_ok && diff <= bound;
      } else {
        fg = std::max(fg, diff);
      }
    }
    min_fg = std::min(min_fg, fg);
    foreground_moves = foreground_moves && fg > 1e-3;

    const EditOutcome plain = reinversion_edit(*fx.field, fx.source, fx.reference, grid, cfg);
    const EditOutcome all_ones =
        msd_edit(*fx.field, fx.source, fx.reference, grid, cfg, Mask::ones(fx.source.dim()));
    ones_identical = ones_identical && all_ones.edited.vec() == plain.edited.vec();
    EditConfig eta0 = cfg;
    eta0.eta = 0.0;
    const EditOutcome no_blend = msd_edit(*fx.field, fx.source, fx.reference, grid, eta0, fx.mask);
    eta0_identical = eta0_identical && no_blend.edited.vec() == plain.edited.vec();
  }
  out.push_back(result("msd", 4, "eta = 1: unmasked coordinates equal the source", background_ok,
                       "worst error / bound = " + fmt(worst_bg)));
  out.push_back(result("msd", 4, "eta = 1: some masked coordinate moves by > 1e-3", foreground_moves,
                       "smallest per-fixture max deviation = " + fmt(min_fg)));
  out.push_back(result("msd", 4, "all-ones mask reproduces ReInversion bit for bit", ones_identical, ""));
  out.push_back(result("msd", 4, "eta = 0 reproduces ReInversion bit for bit", eta0_identical, ""));
  return out;
}

// 5: Recon-Inv and ReInversion agree when reconstruction is exact.
std::vector<CheckResult> reformulation_suite() {
  struct Fixture {
    const char* name;
    FieldPtr field;
  };
  std::vector<Fixture> fixtures;
  fixtures.push_back({"v = x", affine_field(AffineFieldSpec::scalar(8, 1.0))});
  {
    AffineFieldSpec ramp;
    ramp.a_grid = TimeGrid({0.0, 0.5, 1.0});
    ramp.a_values = {-1.0, 0.5, 2.0};
    ramp.dim = 8;
    ramp.condition_dim = 8;
    ramp.b0 = {0.1, -0.2, 0.3, 0.0, 0.5, -0.5, 1.0, 0.25};
    fixtures.push_back({"ramp a(t) with offset", affine_field(ramp)});
  }
  fixtures.push_back({"v = -0.7 x", affine_field(AffineFieldSpec::scalar(8, -0.7))});

  bool final_ok = true;
  bool transition_ok = true;
  double worst_final = 0.0;
  double worst_transition = 0.0;
  for (const Fixture& fx : fixtures) {
    for (std::size_t n : {std::size_t{10}, std::size_t{18}}) {
      const TimeGrid grid = TimeGrid::uniform(n);
      for (std::uint64_t seed : {1u, 2u, 3u}) {
        PriorSampler prior(seed);
        const LatentState x0 = sample_prior(prior, 8);
        const LatentState source = euler_sample(*fx.field, x0, grid, Condition::none()).final_state();
        const LatentState reference = random_state(seed + 50, 8, 1.0);
        const EditConfig cfg{0.2, 1.0, false, seed};
        const EditOutcome direct = reinversion_edit(*fx.field, source, reference, grid, cfg);
        const EditOutcome via_inversion = recon_inv_edit(*fx.field, source, reference, grid, cfg);
        const double scale = std::max(1.0, norm(direct.edited.values()));
        const double err = l2(direct.edited.values(), via_inversion.edited.values()) / scale;
        worst_final = std::max(worst_final, err);
        final_ok = final_ok && err <= 1e-8;
        const double terr =
            l2(via_inversion.inverted_transition_state->values(), direct.stage1_state().values()) /
            std::max(1.0, norm(direct.stage1_state().values()));
        worst_transition = std::max(worst_transition, terr);
        transition_ok = transition_ok && terr <= 1e-9;
      }
    }
  }
  return {
      result("reformulation", 5, "Recon-Inv and ReInversion edits agree (exact reconstruction)",
             final_ok, "worst relative difference = " + fmt(worst_final)),
      result("reformulation", 5, "inverted transition state equals the ReInversion stage-1 state",
             transition_ok, "worst relative difference = " + fmt(worst_transition)),
  };
}

// 6: drift of vanilla inversion against Recon-Inv and the exact inverse.
std::vector<CheckResult> drift_suite() {
  std::vector<CheckResult> out;
  const TimeGrid grid = TimeGrid::uniform(2);
  const auto field = affine_field(AffineFieldSpec::scalar(1, 1.0));
  const LatentState noise({1.0}, 0.0);
  const Trajectory forward = euler_sample(*field, noise, grid, Condition::none());
  const LatentState source = forward.final_state();
  const Condition cond = Condition::source(source.vec());

  const InversionReport vanilla = vanilla_invert(*field, source, grid, cond);
  const ReconInversion recon = recon_invert(*field, source, noise, grid);
  const InversionReport ideal = ideal_invert_affine(field->spec(), source, grid, cond);
  const double v0 = vanilla.estimated_noise()[0];
  out.push_back(result("drift", 6, "forward terminal is 2.25", source[0] == 2.25, fmt(source[0])));
  out.push_back(result("drift", 6, "vanilla inversion returns 0.5625 (error 0.4375)",
                       std::abs(v0 - 0.5625) <= 1e-12 && std::abs(std::abs(v0 - 1.0) - 0.4375) <= 1e-12,
                       fmt(v0)));
  out.push_back(result("drift", 6, "Recon-Inv returns 1.0 +- 1e-12",
                       std::abs(recon.report.estimated_noise()[0] - 1.0) <= 1e-12,
                       fmt(recon.report.estimated_noise()[0])));
  out.push_back(result("drift", 6, "ideal affine inversion returns exactly 1.0",
                       ideal.estimated_noise()[0] == 1.0, fmt(ideal.estimated_noise()[0])));

  const auto curve = drift_curve(vanilla, forward);
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) monotone = monotone && curve[i].value >= curve[i + 1].value;
  out.push_back(result("drift", 6, "vanilla drift accumulates backward in time on v = x", monotone,
                       "drift at t=0: " + fmt(curve.front().value)));

  // Curved, condition-insensitive fixtures (so reconstruction from the true
  // noise is exact): vanilla error must exceed Recon-Inv error tenfold.
  std::vector<std::pair<std::string, FieldPtr>> curved;
  curved.emplace_back("v = x (d=4)", affine_field(AffineFieldSpec::scalar(4, 1.0)));
  {
    AffineFieldSpec ramp;
    ramp.a_grid = TimeGrid({0.0, 1.0});
    ramp.a_values = {0.0, 2.0};
    ramp.dim = 4;
    ramp.condition_dim = 4;
    ramp.b0 = {1.0, -1.0, 0.5, 0.0};
    curved.emplace_back("a(t) = 2t with offset", affine_field(ramp));
  }
  {
    AffineFieldSpec bend;
    bend.a_grid = TimeGrid({0.0, 0.3, 0.7, 1.0});
    bend.a_values = {-1.0, 2.0, 0.5, 3.0};
    bend.dim = 4;
    bend.condition_dim = 4;
    curved.emplace_back("piecewise a(t)", affine_field(bend));
  }
  curved.emplace_back("v = 3x", affine_field(AffineFieldSpec::scalar(4, 3.0)));
  bool ratio_ok = true;
  double worst_ratio = 1e300;
  for (const auto& [name, f] : curved) {
    for (std::size_t n : {std::size_t{2}, std::size_t{8}, std::size_t{18}}) {
      const TimeGrid g = TimeGrid::uniform(n);
      PriorSampler prior(n);
      const LatentState x0 = sample_prior(prior, 4);
      const LatentState src = euler_sample(*f, x0, g, Condition::none()).final_state();
      const Condition c = Condition::source(src.vec());
      const double vanilla_err = l2(vanilla_invert(*f, src, g, c).estimated_noise().values(), x0.values());
      const double recon_err = l2(recon_invert(*f, src, x0, g).report.estimated_noise().values(), x0.values());
      const double ratio = recon_err > 0.0 ? vanilla_err / recon_err : 1e300;
      worst_ratio = std::min(worst_ratio, ratio);
      ratio_ok = ratio_ok && vanilla_err >= 10.0 * recon_err && vanilla_err > 0.0;
    }
  }
  out.push_back(result("drift", 6, "vanilla error >= 10x Recon-Inv error on curved fixtures", ratio_ok,
                       "smallest ratio = " + fmt(worst_ratio)));
  return out;
}

// 7: first-order convergence of Euler against the closed form.
std::vector<CheckResult> convergence_suite() {
  const AffineFieldSpec spec = AffineFieldSpec::scalar(1, 1.0);
  const auto field = affine_field(spec);
  const LatentState start({1.0}, 0.0);
  const double exact = closed_form_affine_solve(spec, start, Condition::none(), 0.0, 1.0)[0];
  std::vector<double> errors;
  for (std::size_t n : {std::size_t{8}, std::size_t{16}, std::size_t{32}, std::size_t{64}}) {
    const Trajectory t = euler_sample(*field, start, TimeGrid::uniform(n), Condition::none());
    errors.push_back(std::abs(t.final_state()[0] - exact));
  }
  std::vector<CheckResult> out;
  out.push_back(result("convergence", 7, "closed form at t = 1 equals e",
                       std::abs(exact - std::exp(1.0)) <= 1e-12, fmt(exact)));
  const char* labels[] = {"8 -> 16", "16 -> 32", "32 -> 64"};
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    const double ratio = errors[k] / errors[k + 1];
    out.push_back(result("convergence", 7, std::string("error ratio ") + labels[k] + " in [1.7, 2.3]",
                         ratio >= 1.7 && ratio <= 2.3, fmt(ratio)));
  }
  return out;
}

double background_deviation(const LatentState& edit, const LatentState& source, const Mask& mask) {
  double acc = 0.0;
  for (std::size_t j = 0; j < source.dim(); ++j) {
    if (mask[j] == 0.0) acc += (edit[j] - source[j]) * (edit[j] - source[j]);
  }
  return std::sqrt(acc);
}

// 8: qualitative direction of the t_tau and eta ablations on shipped fixtures.
std::vector<CheckResult> ablation_suite() {
  const TimeGrid grid = TimeGrid::uniform(18);
  bool tau_ok = true;
  bool eta_ok = true;
  std::string tau_detail;
  std::string eta_detail;
  for (const GridFixture& fx : grid_fixtures()) {
    // t_tau = 0.05 snaps to index 1 on an 18-step grid, 0.5 to index 9.
    const EditOutcome early = reinversion_edit(*fx.field, fx.source, fx.reference, grid, {0.05, 1.0, false, fx.seed});
    const EditOutcome late = reinversion_edit(*fx.field, fx.source, fx.reference, grid, {0.5, 1.0, false, fx.seed});
    const double d_early = l2(early.edited.values(), fx.source.values());
    const double d_late = l2(late.edited.values(), fx.source.values());
    tau_ok = tau_ok && d_early > d_late;
    tau_detail += fmt(d_early) + ">" + fmt(d_late) + " ";

    double previous = 1e300;
    for (double eta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const EditOutcome e = msd_edit(*fx.field, fx.source, fx.reference, grid, {0.2, eta, false, fx.seed}, fx.mask);
      const double dev = background_deviation(e.edited, fx.source, fx.mask);
      eta_ok = eta_ok && dev <= previous;
      previous = dev;
      if (eta == 0.0) eta_detail += fmt(dev) + "->";
    }
    eta_detail += fmt(previous) + " ";
  }
  return {
      result("ablation", 8, "edit moves further from the source at t_tau = 0.05 than at 0.5", tau_ok,
             tau_detail),
      result("ablation", 8, "background deviation non-increasing in eta", eta_ok, eta_detail),
  };
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary);
  std::ifstream fb(b, std::ios::binary);
  const std::string ca((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
  const std::string cb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
  return fa.good() == fb.good() && ca == cb;
}

// 9: every run replays bit-exactly from its metadata.
std::vector<CheckResult> replay_suite() {
  static std::atomic<int> counter{0};
  const fs::path root = fs::temp_directory_path() /
                        ("flowlab-verify-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::create_directories(root);
  using config::Json;
  const Json blob_source{{"blob", {{"rows", 16}, {"cols", 16}, {"row", 7.5}, {"col", 7.5}, {"radius", 3.0}, {"amplitude", 1.0}}}};
  const Json blob_ref{{"blob", {{"rows", 16}, {"cols", 16}, {"row", 5.0}, {"col", 9.0}, {"radius", 2.5}, {"amplitude", -1.5}}}};
  const std::vector<std::pair<std::string, Json>> runs{
      {"sample", Json{{"seed", 7}, {"grid", {{"steps", 18}}}, {"field", "smooth"}, {"dim", 32}}},
      {"invert", Json{{"seed", 9}, {"grid", {{"steps", 18}}}, {"field", "smooth"}, {"method", "recon"},
                      {"source", {{"prior", 3}, {"dim", 32}}}}},
      {"invert", Json{{"seed", 9}, {"grid", {{"steps", 12}}}, {"field", "linear"}, {"method", "vanilla"},
                      {"source", {{"forward", {{"seed", 4}}}}}, {"dim", 4}}},
      {"edit", Json{{"seed", 11}, {"grid", {{"steps", 18}}}, {"field", "guided"},
                    {"edit", {{"t_tau", 0.2}, {"eta", 0.75}}}, {"source", blob_source}, {"reference", blob_ref},
                    {"mask", {{"box", {{"top", 3}, {"left", 3}, {"height", 8}, {"width", 8}}}}}}},
      {"edit", Json{{"seed", 12}, {"grid", {{"steps", 18}}}, {"field", "guided"}, {"method", "recon-inv"},
                    {"source", blob_source}, {"reference", blob_ref}}},
      {"bench", Json{{"seed", 5}, {"grid", {{"steps", 18}}}, {"field", "guided"}, {"seeds", 4}, {"jobs", 3},
                     {"source", blob_source}, {"reference", blob_ref}}},
  };

  std::vector<CheckResult> out;
  std::ostringstream sink;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& [command, doc] = runs[k];
    const fs::path first = root / ("run" + std::to_string(k));
    const fs::path second = root / ("replay" + std::to_string(k));
    const int rc1 = app::run_command(command, doc, first, sink, sink);
    const int rc2 = rc1 == 0 ? app::replay(first / "meta.json", second, sink, sink) : -1;
    bool identical = rc1 == 0 && rc2 == 0;
    std::size_t files = 0;
    if (identical) {
      for (const auto& entry : fs::directory_iterator(first)) {
        ++files;
        identical = identical && same_bytes(entry.path(), second / entry.path().filename());
      }
      std::size_t replayed = 0;
      for ([[maybe_unused]] const auto& entry : fs::directory_iterator(second)) ++replayed;
      identical = identical && replayed == files;
    }
    out.push_back(result("replay", 9, command + " run #" + std::to_string(k) + " replays bit-exactly",
                         identical, std::to_string(files) + " files, exit " + std::to_string(rc1)));
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  return out;
}

const std::map<std::string, Suite>& registry() {
  static const std::map<std::string, Suite> suites{
      {"identity", identity_suite},       {"nfe", nfe_suite},
      {"msd", msd_suite},                 {"reformulation", reformulation_suite},
      {"drift", drift_suite},             {"convergence", convergence_suite},
      {"ablation", ablation_suite},       {"replay", replay_suite},
  };
  return suites;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identity", "nfe",      "msd",      "reformulation",
                                              "drift",    "convergence", "ablation", "replay"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& name) {
  if (name == "all") {
    std::vector<CheckResult> all;
    for (const std::string& suite : suite_names()) {
      auto part = run_suite(suite);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  const auto it = registry().find(name);
  if (it == registry().end()) throw Error(ErrorKind::Config, "unknown verify suite '" + name + "'");
  try {
    return it->second();
  } catch (const Error& e) {
    return {result(it->first.c_str(), 0, "suite raised an error", false, e.what())};
  }
}

bool print_results(const std::vector<CheckResult>& results, std::ostream& out) {
  bool all = true;
  for (const CheckResult& r : results) {
    all = all && r.passed;
    out << (r.passed ? "PASS" : "FAIL") << "  [" << r.suite << "]";
    if (r.criterion > 0) out << " criterion " << r.criterion;
    out << ": " << r.name;
    if (!r.detail.empty()) out << "  (" << r.detail << ")";
    out << "\n";
  }
  return all;
}

}  // namespace flowlab::verify
