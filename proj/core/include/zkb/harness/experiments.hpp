#pragma once

// Named reproducible experiments behind the CLI subcommands. Each writes its
// tables plus a <command>.json pass/fail summary into RunConfig::out_dir.

#include <string>
#include <vector>

#include "zkb/harness/run_config.hpp"

namespace zkb::harness {

enum ExitCode : int { kExitPass = 0, kExitCheckFailure = 1, kExitBlowup = 2, kExitConfigError = 3 };

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double limit = 0.0;
  std::string detail;
};

struct ExperimentResult {
  std::string command;
  int exit_code = kExitPass;
  std::string message;
  std::vector<Check> checks;
  std::vector<std::string> files;

  bool passed() const;
  /// First failing check, or nullptr.
  const Check* first_failure() const;
};

/// Tolerances of one profile. `standard` holds the acceptance values;
/// `strict` tightens every absolute and relative tolerance tenfold.
struct Tolerances {
  double semigroup_rel = 1e-10;
  double semigroup_property = 1e-13;
  double duhamel_rel = 1e-8;
  double flux_rel = 1e-10;
  double l2_monotone_slack = 1e-12;
  double steklov_rel = 1e-13;
  double l2_slope = 1e-3;
  double eigen_slope = 1e-6;
  double mass_abs = 1e-6;
  double refine_ratio_lo = 3.0;
  double refine_ratio_hi = 5.0;
  double h1_slack = 1e-10;
  double picard_match = 1e-6;
  double fractional_slope = 2e-3;
};
Tolerances tolerances(ToleranceProfile p);

ExperimentResult cmd_linear_verify(const RunConfig& cfg);
ExperimentResult cmd_simulate(const RunConfig& cfg);
ExperimentResult cmd_audit(const RunConfig& cfg);
ExperimentResult cmd_decay(const RunConfig& cfg);
ExperimentResult cmd_picard(const RunConfig& cfg);

/// Dispatches by subcommand name. Throws ConfigError for an unknown name.
ExperimentResult run_command(const std::string& name, const RunConfig& cfg);

/// JSON text of a result (command, pass, exit_code, message, checks, files).
std::string summary_json(const ExperimentResult& r, const RunConfig& cfg);

}  // namespace zkb::harness
