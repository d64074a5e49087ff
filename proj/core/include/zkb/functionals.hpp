#pragma once

// Norms, the Steklov check, interpolation-ratio monitoring, nonlinear
// energy-identity audits and decay-rate extraction.

#include <optional>
#include <string>
#include <vector>

#include "zkb/domain.hpp"
#include "zkb/energy_report.hpp"
#include "zkb/trajectory.hpp"

namespace zkb {

/// Either the full H^s norm (multiplier (1 + xi^2 + lambda)^s, s in [0, 2])
/// or the seminorm || |D^k u| ||, k in {1, 2, 3}, where |D^k u|^2 sums the
/// squares of all k-th partials with k1 + k2 = k (weight sum xi^{2k1} lambda^{k2}).
struct NormSpec {
  enum class Kind { full, seminorm };
  Kind kind = Kind::full;
  double s = 0.0;
  int k = 1;

  /// Throws ConfigError unless 0 <= s <= 2.
  static NormSpec full_hs(double s);
  /// Throws ConfigError unless k in {1, 2, 3}.
  static NormSpec seminorm_k(int k);
  static NormSpec l2() { return full_hs(0.0); }

  std::string label() const;
  double weight(double xi2, double lam) const;
};

double norm(const SpectralField& u, const NormSpec& spec, const DomainConfig& d);

struct SteklovResult {
  double lhs = 0.0;     // ∫∫ u_y^2
  double rhs = 0.0;     // (pi^2 / L^2) ∫∫ u^2
  double margin = 0.0;  // lhs - rhs
  bool holds(double rel_slack = 1e-13) const { return margin >= -rel_slack * rhs; }
};

SteklovResult steklov_check(const SpectralField& u, const DomainConfig& d);

struct InterpolationRatio {
  double s = 0.0;
  double lq_norm = 0.0;     // || |D^m u| ||_{L_q}
  double dk_norm = 0.0;     // || |D^k u| ||_{L_2}
  double l2_norm = 0.0;     // || u ||_{L_2}
  double ratio = 0.0;       // lq / (dk^{2s} l2^{1-2s} + l2)
  double ratio_homogeneous = 0.0;  // lq / (dk^{2s} l2^{1-2s})
};

/// Ratio of both sides of the interpolation inequality. L_q uses the
/// trapezoid weights of the collocation grid extended by the wall rows.
/// Zero data gives ratio 0. Throws ConfigError unless k >= 1, 0 <= m < k,
/// m <= 2, k <= 3, q finite with q >= 2, and s in [0, 1/2].
InterpolationRatio interpolation_ratio(const SpectralField& u, int m, int k, double q, const DomainConfig& d);

enum class NonlinearIdentity { mass_3_3, h1_3_15, combined_3_23, h2_3_29 };

std::string identity_name(NonlinearIdentity which);
/// Parses the names produced by identity_name. Throws ConfigError.
NonlinearIdentity parse_identity(const std::string& name);

/// Residual of the selected energy identity along a simulated trajectory:
///   mass_3_3:      ∫∫u^2 + 2δ∫∫∫|Du|^2 - ∫∫u_0^2
///   h1_3_15:       ∫∫|Du|^2 + 2δ∫∫∫(u_xx^2+2u_xy^2+u_yy^2) - ∫∫|Du_0|^2 - 2∫∫∫ u u_x Δu
///   combined_3_23: ∫∫(|Du|^2 - u^3/3) + 2δ∫∫∫(u_xx^2+2u_xy^2+u_yy^2) + δ∫∫∫u^2 Δu - (same at t = 0)
///   h2_3_29:       ∫∫|D^2u|^2 + 2δ∫∫∫(u_xxx^2+2u_xxy^2+2u_xyy^2+u_yyy^2) - ∫∫|D^2u_0|^2 - source
/// with trapezoid quadrature in time. Throws InsufficientData if the
/// trajectory has fewer than two steps or lacks full diagnostics when needed.
EnergyReport audit_identity(const Trajectory& traj, NonlinearIdentity which, const DomainConfig& d);

struct DecayFit {
  double t_begin = 0.0;
  double t_end = 0.0;
  double slope = 0.0;      // d ln ||u|| / dt
  double intercept = 0.0;
  double residual = 0.0;   // rms deviation of ln ||u|| from the line
  std::size_t samples = 0;
  std::string norm_label;
};

/// Least-squares slope of ln ||u(t)|| over the snapshots in the window
/// (default [0.2 T, T]). Throws InsufficientData with fewer than 10 samples
/// and with "norm underflow" if the norm is not positive in the window.
DecayFit decay_fit(const Trajectory& traj, const NormSpec& spec, const DomainConfig& d,
                   std::optional<std::pair<double, double>> window = std::nullopt);

/// Same fit on (t, value) samples of a norm.
DecayFit fit_log_slope(const std::vector<double>& t, const std::vector<double>& norms, double t_begin, double t_end,
                       const std::string& label);

struct ThresholdReport {
  std::optional<double> time;  // first recorded time with the threshold met
  double threshold = 0.0;
  std::size_t violations = 0;  // steps after the threshold where the functional grew
  double worst_increase = 0.0; // largest relative increase seen
};

/// H^1 level: first time with ∫∫u^2 <= min(δ/(2c1), δπ^2/(2c1 L^2)), then
/// checks ∫∫(|Du|^2 + u^2) is non-increasing (relative slack) afterwards.
ThresholdReport threshold_time(const Trajectory& traj, double c1, const DomainConfig& d, double slack = 1e-10);

/// H^2 level: first time with ∫∫(|Du|^2 + u^2) <= min(δ/(2c1), δπ^2/(2c1 L^2), δ/(2c2)),
/// then checks ∫∫(|D^2u|^2 + |Du|^2 + u^2) is non-increasing afterwards.
ThresholdReport threshold_time_h2(const Trajectory& traj, double c1, double c2, const DomainConfig& d,
                                  double slack = 1e-10);

/// Ratios whose supremum over a corpus defines the calibration constants.
struct CalibrationSample {
  double c_square = 0.0;  // ||u^2||^2 / (∫∫(|Du|^2+u^2) ∫∫u^2)
  double c1 = 0.0;        // |∫∫ u u_x Δu| / (∫∫(|D^2u|^2+u^2) ∫∫u^2)
  double c2 = 0.0;        // |hess source| / (∫∫(|Du|^2+u^2) ∫∫|D^2u|^2)
};
CalibrationSample calibration_sample(const SpectralField& u, const DomainConfig& d);

}  // namespace zkb
