#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zkb/domain.hpp"

namespace zkb {

/// How much is measured at every step. `basic` covers the norms, the
/// dissipation rates and the nonlinear flux; `full` adds the grid integrals
/// the H^1, combined and H^2 identity audits need.
enum class DiagnosticsLevel { basic, full };

/// Integrals of one state, all in the X*L normalization.
struct StepDiagnostics {
  double t = 0.0;
  double mass = 0.0;       // ∫∫ u^2
  double grad = 0.0;       // ∫∫ |Du|^2
  double hess = 0.0;       // ∫∫ |D^2 u|^2
  double grad_diss = 0.0;  // ∫∫ (u_xx^2 + 2u_xy^2 + u_yy^2)
  double hess_diss = 0.0;  // ∫∫ (u_xxx^2 + 2u_xxy^2 + 2u_xyy^2 + u_yyy^2)
  double h2_full = 0.0;    // ∫∫ sum (1 + xi^2 + lambda)^2 |c|^2
  double nonlin_flux = 0.0;  // ∫∫ g(u) u_x
  double max_abs = 0.0;      // max |u| on the grid
  int step_iters = 0;        // fixed-point iterations of the step ending here

  // DiagnosticsLevel::full only.
  // Source terms are formed from the pseudospectral nonlinear term N(u),
  // so they equal the rates the stepper actually integrates.
  double cubic = 0.0;         // ∫∫ u^3
  double grad_source = 0.0;   // 2 ∫∫ u u_x (u_xx + u_yy)
  double cubic_diss = 0.0;    // ∫∫ u^2 (u_xx + u_yy)
  double cubic_source = 0.0;  // ∫∫ u^2 (u_xxx + u_xyy - N(u)), equals -2 ∫∫ u u_x (u_xx + u_yy) for exact quadrature
  double hess_source = 0.0;   // -2 ∫∫ ((uu_x)_xx u_xx + (uu_x)_xy u_xy + (uu_x)_yy u_yy)

  double l2() const;
  double h1() const;  // sqrt(mass + grad)
  double h2() const;  // sqrt(h2_full)
};

/// Time series produced by the linear and nonlinear solvers.
struct Trajectory {
  double dt = 0.0;
  DiagnosticsLevel level = DiagnosticsLevel::basic;

  /// One entry per step boundary, times strictly increasing.
  std::vector<StepDiagnostics> diagnostics;

  /// Strided spectral snapshots.
  std::vector<double> snapshot_times;
  std::vector<SpectralField> snapshots;

  /// Forcing samples aligned with `diagnostics` (linear Duhamel runs only).
  std::vector<SpectralField> forcing;

  /// Set when the run stopped on the blowup guard.
  std::optional<double> blowup_time;
  std::string blowup_message;

  std::size_t steps() const { return diagnostics.empty() ? 0 : diagnostics.size() - 1; }
  std::vector<double> times() const;
  bool every_step_stored() const { return !snapshots.empty() && snapshots.size() == diagnostics.size(); }
};

/// Norms and dissipation rates of `u`; grid-based entries stay zero.
StepDiagnostics spectral_diagnostics(const SpectralField& u, const DomainConfig& d, double t);

/// Cumulative trapezoid integral of samples v over t, same length as t.
std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> v);

/// Diagnostics CSV columns: t, l2, h1, h2, diss_l2, diss_h1, nonlin_flux, step_iters.
/// diss_l2 = 2δ∫₀ᵗ ∫∫|Du|², diss_h1 = 2δ∫₀ᵗ ∫∫(u_xx²+2u_xy²+u_yy²).
struct DiagnosticsRow {
  double t, l2, h1, h2, diss_l2, diss_h1, nonlin_flux;
  int step_iters;
};
std::vector<DiagnosticsRow> diagnostics_table(const Trajectory& traj, double delta);

}  // namespace zkb
