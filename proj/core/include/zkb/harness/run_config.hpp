#pragma once

// Flat key=value run configuration. Lines are "key = value"; '#' starts a
// comment; blank lines are ignored. Unknown keys are a ConfigError.
//
//   L, X, nx, ny, delta                       domain
//   scheme (etd2|picard), dt, picard_tol,
//   picard_max_iter, dealias (true|false)     stepper
//   flux_h (none|number in (0,1])             flux
//   init (eigenmode|traveling_mode|gaussian_bump|random_band|zero),
//   init_l, init_j, init_x0, init_sigma_x,
//   init_amplitude, init_seed, init_jmax,
//   init_lmax                                  initial data
//   t_end, snapshot_stride, diagnostics (basic|full)
//   out_dir, tolerance_profile (strict|default)
//   picard_t0 (comma-separated list)          cmd_picard
//   identities (comma-separated list)         cmd_audit

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "zkb/domain.hpp"
#include "zkb/flux.hpp"
#include "zkb/nonlinear.hpp"

namespace zkb::harness {

enum class InitKind { zero, eigenmode, traveling_mode, gaussian_bump, random_band };

struct InitialDataSpec {
  InitKind kind = InitKind::gaussian_bump;
  int l = 1;
  int j = 1;
  double x0 = 0.0;
  double sigma_x = 2.0;
  double amplitude = 1.0;
  std::uint64_t seed = 1;
  int jmax = 4;
  int lmax = 4;
};

enum class ToleranceProfile { strict, standard };

struct RunConfig {
  double L = 3.14159265358979323846;
  double X = 16.0 * 3.14159265358979323846;
  int nx = 256;
  int ny = 64;
  double delta = 0.5;

  StepperConfig stepper;
  bool regularized = false;
  double flux_h = 1.0;

  InitialDataSpec init;

  double t_end = 6.0;
  int snapshot_stride = 50;
  DiagnosticsLevel diagnostics = DiagnosticsLevel::basic;
  std::string out_dir = "zkb_out";
  ToleranceProfile tolerance_profile = ToleranceProfile::standard;
  std::vector<double> picard_t0 = {0.0125, 0.025, 0.05};
  std::vector<std::string> identities = {"mass_3_3", "h1_3_15", "combined_3_23", "h2_3_29"};

  DomainConfig domain() const { return plan_domain(L, X, nx, ny, delta); }
  RegularizedFlux flux() const {
    return regularized ? RegularizedFlux::with_scale(flux_h) : RegularizedFlux::unregularized();
  }
  RecordOptions record() const { return RecordOptions{snapshot_stride, diagnostics}; }

  /// Sets one key from its textual value. Throws ConfigError.
  void set(const std::string& key, const std::string& value);
  /// Checks cross-field constraints. Throws ConfigError.
  void validate() const;
  /// Canonical key=value dump (sorted keys), loadable by parse_config.
  std::string to_text() const;
};

/// Reads a config file over the defaults. Throws ConfigError on I/O or syntax errors.
RunConfig load_config(const std::string& path);
/// Parses config text over `base`.
RunConfig parse_config(const std::string& text, RunConfig base = {});

const char* scheme_name(Scheme s);
const char* profile_name(ToleranceProfile p);

}  // namespace zkb::harness
