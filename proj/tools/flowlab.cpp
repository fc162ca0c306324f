// flowlab: command-line runner for sampling, inversion and editing experiments.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "flowlab/commands.hpp"
#include "flowlab/config.hpp"
#include "flowlab/kernels.hpp"
#include "flowlab/verify.hpp"

namespace {

using flowlab::app::Overrides;

struct CommonOptions {
  std::string config_path;
  std::optional<std::string> out;
  Overrides overrides;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool edit_flags) {
  cmd->add_option("--config", o.config_path, "Experiment configuration (JSON, or a run's meta.json)");
  cmd->add_option("--out", o.out, "Output directory (default $FLOWLAB_OUT/<command>)");
  cmd->add_option("--steps", o.overrides.steps, "Number of uniform grid steps");
  cmd->add_option("--seed", o.overrides.seed, "Prior seed");
  cmd->add_option("--field", o.overrides.field, "Field preset: zero, linear, smooth, guided");
  cmd->add_option("--method", o.overrides.method, "Method (invert: vanilla|ideal-affine|recon; edit: reinversion|recon-inv)");
  if (edit_flags) {
    cmd->add_option("--t-tau", o.overrides.t_tau, "Transition time in (0, 1)");
    cmd->add_option("--eta", o.overrides.eta, "Background blend coefficient in [0, 1]");
    cmd->add_option("--mask", o.overrides.mask, "Mask file (v1 state format or P5 PGM)");
    cmd->add_flag("--deterministic-stage1", o.overrides.deterministic_stage1,
                  "Use the model-free velocity toward the source in stage 1");
  }
}

int run(const std::string& command, const CommonOptions& o, const std::string& config_cmd) {
  flowlab::config::Json doc = flowlab::config::Json::object();
  try {
    if (!o.config_path.empty()) doc = flowlab::config::load(o.config_path);
  } catch (const flowlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return flowlab::app::kConfigError;
  }
  flowlab::app::apply_overrides(doc, o.overrides);
  const auto out_dir = flowlab::app::resolve_out_dir(o.out, config_cmd);
  const int rc = flowlab::app::run_command(command, doc, out_dir, std::cout, std::cerr);
  if (rc == 0) std::cout << "wrote " << out_dir.string() << "\n";
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flowlab: flow-matching inversion and exemplar-guided editing laboratory"};
  app.require_subcommand(1);
  std::string kernels;
  app.add_option("--kernels", kernels, "Force a kernel set: scalar, avx2, neon");

  CommonOptions sample_opts, invert_opts, edit_opts, reinvert_opts, bench_opts;
  CLI::App* sample = app.add_subcommand("sample", "Euler sampling from the prior");
  add_common(sample, sample_opts, false);
  CLI::App* invert = app.add_subcommand("invert", "Invert a data sample to noise");
  add_common(invert, invert_opts, false);
  CLI::App* edit = app.add_subcommand("edit", "Exemplar-guided edit");
  add_common(edit, edit_opts, true);
  CLI::App* reinvert = app.add_subcommand("reinvert", "Alias of edit --method reinversion");
  add_common(reinvert, reinvert_opts, true);
  CLI::App* bench = app.add_subcommand("bench", "NFE and timing comparison of the edit pipelines");
  add_common(bench, bench_opts, true);
  std::size_t jobs = 0;
  bench->add_option("--jobs", jobs, "Worker threads (results do not depend on this)");

  std::string suite = "all";
  CLI::App* verify = app.add_subcommand("verify", "Run acceptance suites");
  verify->add_option("suite", suite,
                     "identity | nfe | msd | reformulation | drift | convergence | ablation | replay | all");

  std::string meta_path;
  std::optional<std::string> replay_out;
  CLI::App* replay = app.add_subcommand("replay", "Re-run a recorded run from its meta.json");
  replay->add_option("meta", meta_path, "Path to meta.json")->required();
  replay->add_option("--out", replay_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!kernels.empty()) {
      const auto* table = flowlab::kernels::find_table(kernels);
      if (table == nullptr) {
        std::cerr << "error: kernel set '" << kernels << "' is not available on this machine\n";
        return flowlab::app::kCapability;
      }
      flowlab::kernels::set_active(*table);
    }

    if (sample->parsed()) return run("sample", sample_opts, "sample");
    if (invert->parsed()) return run("invert", invert_opts, "invert");
    if (edit->parsed()) return run("edit", edit_opts, "edit");
    if (reinvert->parsed()) {
      reinvert_opts.overrides.method = "reinversion";
      return run("edit", reinvert_opts, "reinvert");
    }
    if (bench->parsed()) {
      CommonOptions o = bench_opts;
      flowlab::config::Json doc = flowlab::config::Json::object();
      if (!o.config_path.empty()) doc = flowlab::config::load(o.config_path);
      flowlab::app::apply_overrides(doc, o.overrides);
      if (jobs > 0) doc["jobs"] = jobs;
      const auto out_dir = flowlab::app::resolve_out_dir(o.out, "bench");
      return flowlab::app::run_command("bench", doc, out_dir, std::cout, std::cerr);
    }
    if (verify->parsed()) {
      std::cout << "kernels: " << flowlab::kernels::active().name << "\n";
      const auto results = flowlab::verify::run_suite(suite);
      return flowlab::verify::print_results(results, std::cout) ? 0 : flowlab::app::kCheckFailed;
    }
    if (replay->parsed()) {
      const auto out_dir = flowlab::app::resolve_out_dir(replay_out, "replay");
      const int rc = flowlab::app::replay(meta_path, out_dir, std::cout, std::cerr);
      if (rc == 0) std::cout << "wrote " << out_dir.string() << "\n";
      return rc;
    }
  } catch (const flowlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return flowlab::app::exit_code_for(e.kind());
  }
  return 0;
}
