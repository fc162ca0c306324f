#include "flowlab/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>
#include <vector>

#include "flowlab/inversion.hpp"
#include "flowlab/io.hpp"
#include "flowlab/kernels.hpp"
#include "flowlab/metrics.hpp"
#include "flowlab/msd.hpp"
#include "flowlab/reinversion.hpp"
#include "flowlab/solver.hpp"

namespace flowlab::app {

namespace fs = std::filesystem;
using config::Json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivergedIntegration: return kDiverged;
    case ErrorKind::Capability: return kCapability;
    case ErrorKind::DegenerateSplit: return kDegenerateSplit;
    default: return kConfigError;
  }
}

void apply_overrides(Json& doc, const Overrides& o) {
  if (o.steps) doc["grid"] = Json{{"steps", *o.steps}};
  if (o.t_tau) doc["edit"]["t_tau"] = *o.t_tau;
  if (o.eta) doc["edit"]["eta"] = *o.eta;
  if (o.deterministic_stage1) doc["edit"]["deterministic_stage1"] = true;
  if (o.seed) doc["seed"] = *o.seed;
  if (o.field) doc["field"] = *o.field;
  if (o.mask) doc["mask"] = Json{{"file", fs::absolute(*o.mask).string()}};
  if (o.method) doc["method"] = *o.method;
}

fs::path resolve_out_dir(const std::optional<std::string>& explicit_dir, const std::string& command) {
  if (explicit_dir) return *explicit_dir;
  if (const char* root = std::getenv("FLOWLAB_OUT"); root != nullptr && *root != '\0') {
    return fs::path(root) / command;
  }
  return fs::path("flowlab-out") / command;
}

namespace {

std::vector<double> values_of(const LatentState& s) { return s.vec(); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const Json& doc) { write_text(path, doc.dump(2) + "\n"); }

template <typename Writer>
void write_csv(const fs::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  writer(out);
}

std::size_t dim_hint(const Json& doc, std::initializer_list<const char*> state_keys) {
  if (doc.contains("dim")) return doc.at("dim").get<std::size_t>();
  for (const char* key : state_keys) {
    if (doc.contains(key)) {
      if (auto d = config::state_dim(doc.at(key))) return *d;
    }
  }
  return 0;
}

/// Resolved field: normalized spec is written back into the document.
FieldPtr field_of(Json& doc, std::size_t hint) {
  const Json raw = doc.contains("field") ? doc.at("field") : Json("guided");
  doc["field"] = config::normalize_field_spec(raw, hint);
  return config::build_field(doc.at("field"));
}

void write_meta(const fs::path& dir, const std::string& command, const Json& doc,
                const TimeGrid* grid) {
  Json meta;
  meta["tool"] = "flowlab";
  meta["version"] = config::kToolVersion;
  meta["command"] = command;
  meta["seed"] = config::seed_of(doc);
  meta["generator"] = PriorSampler::kGeneratorId;
  meta["kernels"] = kernels::active().name;
  meta["grid"] = grid ? Json(grid->times()) : Json();
  meta["field"] = doc.contains("field") ? doc.at("field") : Json();
  meta["config"] = doc;
  write_json(dir / "meta.json", meta);
}

Condition condition_from(const Json& doc, const config::StateContext& ctx, const LatentState* source) {
  if (!doc.contains("condition")) {
    return source ? Condition::source(source->vec()) : Condition::none();
  }
  const Json& c = doc.at("condition");
  const std::string tag = c.value("tag", "none");
  if (tag == "none") return Condition::none();
  std::vector<double> payload;
  if (c.contains("state")) {
    payload = config::build_state(c.at("state"), ctx).vec();
  } else if (source != nullptr) {
    payload = source->vec();
  } else {
    throw Error(ErrorKind::Config, "config is missing required key 'condition.state'");
  }
  if (tag == "source") return Condition::source(std::move(payload));
  if (tag == "reference") return Condition::reference(std::move(payload));
  throw Error(ErrorKind::Config, "condition.tag must be none, source or reference");
}

int cmd_sample(Json doc, const fs::path& dir, std::ostream& out) {
  const TimeGrid grid = config::grid_of(doc);
  if (!doc.contains("start")) {
    Json start{{"prior", config::seed_of(doc)}};
    if (doc.contains("dim")) start["dim"] = doc.at("dim");
    doc["start"] = start;
  }
  const FieldPtr field = field_of(doc, dim_hint(doc, {"start"}));
  config::StateContext ctx{field.get(), grid, 0.0};
  if (doc.at("start").is_object() && doc.at("start").contains("prior") &&
      !doc.at("start").contains("dim")) {
    doc["start"]["dim"] = field->dim();
  }
  const LatentState start = config::build_state(doc.at("start"), ctx);
  const Condition condition = condition_from(doc, ctx, nullptr);

  const Trajectory traj = euler_sample(*field, start, grid, condition);
  fs::create_directories(dir);
  write_csv(dir / "trajectory.csv", [&](std::ostream& o) { io::write_trajectory_csv(o, traj); });
  write_csv(dir / "velocities.csv", [&](std::ostream& o) { io::write_velocities_csv(o, traj); });
  io::write_state(dir / "terminal.state", traj.final_state());
  write_json(dir / "summary.json",
             Json{{"command", "sample"}, {"nfe", traj.model_evaluations},
                  {"terminal", values_of(traj.final_state())}});
  write_meta(dir, "sample", doc, &grid);
  out << "nfe " << traj.model_evaluations << "\n";
  return kOk;
}

int cmd_invert(Json doc, const fs::path& dir, std::ostream& out) {
  const TimeGrid grid = config::grid_of(doc);
  const std::string method = doc.value("method", "recon");
  if (method != "vanilla" && method != "ideal-affine" && method != "recon") {
    throw Error(ErrorKind::Config, "invert method must be vanilla, ideal-affine or recon");
  }
  doc["method"] = method;
  config::require(doc, "source");
  const FieldPtr field = field_of(doc, dim_hint(doc, {"source"}));
  config::StateContext ctx{field.get(), grid, 1.0};
  const LatentState source = config::build_state(config::require(doc, "source"), ctx);

  Json report;
  report["method"] = method;
  std::optional<InversionReport> inv;
  std::optional<Trajectory> forward;
  std::optional<LatentState> true_noise;

  const Json& source_spec = doc.at("source");
  if (method != "recon" && source_spec.contains("forward")) {
    PriorSampler sampler(source_spec.at("forward").value("seed", std::uint64_t{0}));
    true_noise = sample_prior(sampler, field->dim(), source.shape());
    forward = euler_sample(*field, *true_noise, grid, Condition::none());
  }

  if (method == "recon") {
    PriorSampler noise(config::seed_of(doc));
    ReconInversion recon = recon_invert(*field, source, noise, grid);
    const double gap = error_identity_gap(recon.report, recon.reconstruction, source, recon.true_noise);
    report["identity_gap"] = gap;
    report["reconstruction_error"] = l2(source.values(), recon.reconstruction.final_state().values());
    true_noise = recon.true_noise;
    forward = recon.reconstruction;
    inv = std::move(recon.report);
  } else {
    const Condition condition = condition_from(doc, ctx, &source);
    if (method == "vanilla") {
      inv = vanilla_invert(*field, source, grid, condition);
    } else {
      const auto* affine = dynamic_cast<const AffineField*>(field.get());
      if (affine == nullptr) {
        throw Error(ErrorKind::Capability,
                    "ideal-affine inversion needs an affine field, got '" + field->kind() + "'");
      }
      inv = ideal_invert_affine(affine->spec(), source, grid, condition);
    }
  }

  report["nfe"] = inv->nfe;
  report["estimated_noise"] = values_of(inv->estimated_noise());
  report["top_step_clamped"] = inv->top_step_clamped;
  if (true_noise) {
    report["true_noise"] = values_of(*true_noise);
    report["inversion_error"] = l2(inv->estimated_noise().values(), true_noise->values());
  }

  fs::create_directories(dir);
  write_csv(dir / "states.csv", [&](std::ostream& o) { io::write_states_csv(o, inv->intermediate_states); });
  if (forward) {
    const auto curve = drift_curve(*inv, *forward);
    write_csv(dir / "drift.csv", [&](std::ostream& o) { io::write_curve_csv(o, curve); });
  }
  write_json(dir / "report.json", report);
  write_meta(dir, "invert", doc, &grid);
  out << "method " << method << "  nfe " << inv->nfe << "\n";
  return kOk;
}

struct EditRun {
  EditOutcome outcome;
  std::uint64_t counter_delta;
  bool masked;
};

EditRun run_edit(const VelocityField& field, const LatentState& source, const LatentState& reference,
                 const TimeGrid& grid, const EditConfig& cfg, const std::string& method,
                 const std::optional<Mask>& mask) {
  const std::uint64_t before = field.eval_count();
  std::optional<EditOutcome> outcome;
  if (method == "recon-inv") {
    outcome = recon_inv_edit(field, source, reference, grid, cfg, mask ? &*mask : nullptr);
  } else if (mask) {
    outcome = msd_edit(field, source, reference, grid, cfg, *mask);
  } else {
    outcome = reinversion_edit(field, source, reference, grid, cfg);
  }
  return {std::move(*outcome), field.eval_count() - before, mask.has_value()};
}

int cmd_edit(Json doc, const fs::path& dir, std::ostream& out) {
  const TimeGrid grid = config::grid_of(doc);
  const std::string method = doc.value("method", "reinversion");
  if (method != "reinversion" && method != "recon-inv") {
    throw Error(ErrorKind::Config, "edit method must be reinversion or recon-inv");
  }
  doc["method"] = method;
  config::require(doc, "source");
  config::require(doc, "reference");
  const FieldPtr field = field_of(doc, dim_hint(doc, {"source", "reference"}));
  const EditConfig cfg = config::edit_config_of(doc);
  config::StateContext ctx{field.get(), grid, 1.0};
  const LatentState source = config::build_state(config::require(doc, "source"), ctx);
  const LatentState reference = config::build_state(config::require(doc, "reference"), ctx);
  std::optional<Mask> mask;
  if (doc.contains("mask") && !doc.at("mask").is_null()) {
    mask = config::build_mask(doc.at("mask"), source.shape(), source.dim());
  }

  EditRun run = run_edit(*field, source, reference, grid, cfg, method, mask);
  const EditOutcome& o = run.outcome;

  fs::create_directories(dir);
  io::write_state(dir / "edited.state", o.edited);
  if (o.edited.shape()) io::write_pgm(dir / "edited.pgm", o.edited.values(), *o.edited.shape());
  write_csv(dir / "trajectory.csv", [&](std::ostream& s) { io::write_trajectory_csv(s, o.trajectory); });
  write_csv(dir / "velocities.csv", [&](std::ostream& s) { io::write_velocities_csv(s, o.trajectory); });
  Json summary{{"command", "edit"},
               {"method", method},
               {"nfe", o.nfe},
               {"field_evaluations", run.counter_delta},
               {"tau", o.stage_boundary},
               {"t_tau", cfg.t_tau},
               {"eta", cfg.eta},
               {"seed", cfg.seed},
               {"deterministic_stage1", cfg.deterministic_stage1},
               {"masked", run.masked},
               {"tau_rule", "smallest i with t_i >= t_tau"},
               {"distance_to_source", l2(o.edited.values(), source.values())},
               {"distance_to_reference", l2(o.edited.values(), reference.values())}};
  write_json(dir / "summary.json", summary);
  write_meta(dir, "edit", doc, &grid);
  out << "method " << method << (cfg.deterministic_stage1 ? " (deterministic stage 1)" : "")
      << "  tau " << o.stage_boundary << "  nfe " << o.nfe << "\n";
  return kOk;
}

int cmd_bench(Json doc, const fs::path& dir, std::ostream& out) {
  const TimeGrid grid = config::grid_of(doc);
  const std::size_t seeds = doc.value("seeds", std::size_t{8});
  std::size_t jobs = doc.value("jobs", std::size_t{0});
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  // Worker count does not change results; keep it out of the replay record.
  doc.erase("jobs");
  Json field_spec = doc.contains("field") ? doc.at("field") : Json("guided");
  const std::size_t hint = dim_hint(doc, {"source", "reference"});
  field_spec = config::normalize_field_spec(field_spec, hint);
  doc["field"] = field_spec;
  const EditConfig base = config::edit_config_of(doc);
  {
    const FieldPtr probe = config::build_field(field_spec);
    config::StateContext ctx{probe.get(), grid, 1.0};
    (void)config::build_state(config::require(doc, "source"), ctx);
  }

  struct Variant {
    const char* label;
    const char* method;
    bool deterministic;
  };
  const std::vector<Variant> variants{{"recon-inv", "recon-inv", false},
                                      {"reinversion", "reinversion", false},
                                      {"reinversion*", "reinversion", true}};
  struct Row {
    std::size_t nfe = 0;
    std::uint64_t counted = 0;
    double distance = 0.0;
    double millis = 0.0;
  };
  std::vector<Row> rows(seeds * variants.size());

  auto work = [&](std::size_t worker) {
    for (std::size_t job = worker; job < rows.size(); job += jobs) {
      const std::size_t seed_idx = job / variants.size();
      const Variant& v = variants[job % variants.size()];
      const FieldPtr field = config::build_field(field_spec);
      config::StateContext ctx{field.get(), grid, 1.0};
      const LatentState source = config::build_state(doc.at("source"), ctx);
      const LatentState reference = config::build_state(config::require(doc, "reference"), ctx);
      EditConfig cfg = base;
      cfg.seed = base.seed + seed_idx;
      cfg.deterministic_stage1 = v.deterministic;
      const auto t0 = std::chrono::steady_clock::now();
      EditRun run = run_edit(*field, source, reference, grid, cfg, v.method, std::nullopt);
      const auto t1 = std::chrono::steady_clock::now();
      rows[job] = {run.outcome.nfe, run.counter_delta,
                   l2(run.outcome.edited.values(), source.values()),
                   std::chrono::duration<double, std::milli>(t1 - t0).count()};
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < jobs; ++w) pool.emplace_back(work, w);
    work(0);
  }

  fs::create_directories(dir);
  write_csv(dir / "bench.csv", [&](std::ostream& s) {
    s << "seed,method,nfe,field_evaluations,distance_to_source\n";
    char buf[32];
    for (std::size_t job = 0; job < rows.size(); ++job) {
      std::snprintf(buf, sizeof buf, "%.17g", rows[job].distance);
      s << base.seed + job / variants.size() << ',' << variants[job % variants.size()].label << ','
        << rows[job].nfe << ',' << rows[job].counted << ',' << buf << '\n';
    }
  });
  write_meta(dir, "bench", doc, &grid);

  out << "method          nfe   mean ms   nfe-speedup vs recon-inv\n";
  const double baseline = static_cast<double>(rows[0].nfe);
  for (std::size_t k = 0; k < variants.size(); ++k) {
    double total_ms = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) total_ms += rows[s * variants.size() + k].millis;
    char line[128];
    std::snprintf(line, sizeof line, "%-14s %4zu %9.3f %8.4fx\n", variants[k].label, rows[k].nfe,
                  total_ms / static_cast<double>(seeds), baseline / static_cast<double>(rows[k].nfe));
    out << line;
  }
  return kOk;
}

}  // namespace

int run_command(const std::string& command, const Json& doc, const fs::path& out_dir,
                std::ostream& out, std::ostream& err) {
  try {
    if (command == "sample") return cmd_sample(doc, out_dir, out);
    if (command == "invert") return cmd_invert(doc, out_dir, out);
    if (command == "edit") return cmd_edit(doc, out_dir, out);
    if (command == "bench") return cmd_bench(doc, out_dir, out);
    err << "error: unknown command '" << command << "'\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed config: " << e.what() << "\n";
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

int replay(const fs::path& meta_path, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  Json meta;
  try {
    std::ifstream in(meta_path);
    if (!in) throw Error(ErrorKind::Config, "cannot read " + meta_path.string());
    meta = Json::parse(in);
    config::require(meta, "command");
    config::require(meta, "config");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed metadata: " << e.what() << "\n";
    return kConfigError;
  }
  const std::string recorded = meta.value("kernels", "");
  const kernels::KernelTable* table = kernels::find_table(recorded);
  if (table == nullptr) {
    err << "error: run used kernel set '" << recorded << "', which is unavailable here\n";
    return kCapability;
  }
  kernels::ScopedTable scoped(*table);
  return run_command(meta.at("command").get<std::string>(), meta.at("config"), out_dir, out, err);
}

}  // namespace flowlab::app
