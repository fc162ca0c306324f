#pragma once

// Subcommand runners shared by the CLI binary, the verify suites and tests.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "flowlab/config.hpp"

namespace flowlab::app {

/// Stable exit codes.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kDiverged = 3,
  kCapability = 4,
  kDegenerateSplit = 5,
};

int exit_code_for(ErrorKind kind);

/// Command-line flags that override keys of the config document.
struct Overrides {
  std::optional<std::size_t> steps;
  std::optional<double> t_tau;
  std::optional<double> eta;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> field;
  std::optional<std::string> mask;
  std::optional<std::string> method;
  bool deterministic_stage1 = false;
};

void apply_overrides(config::Json& doc, const Overrides& overrides);

/// Output directory: explicit path, else $FLOWLAB_OUT/<command>, else
/// ./flowlab-out/<command>.
std::filesystem::path resolve_out_dir(const std::optional<std::string>& explicit_dir,
                                      const std::string& command);

/// Runs sample | invert | edit | bench on a resolved config, writing
/// artifacts into out_dir. Errors are reported on err and mapped to exit
/// codes; nothing throws.
int run_command(const std::string& command, const config::Json& doc,
                const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);

/// Re-runs the command recorded in a run's meta.json.
int replay(const std::filesystem::path& meta_path, const std::filesystem::path& out_dir,
           std::ostream& out, std::ostream& err);

}  // namespace flowlab::app
