#pragma once

// Nonlinear flow u_t + u_xxx + u_xyy + (g(u))_x - delta (u_xx + u_yy) = 0
// with the linear part integrated exactly through the multiplier table.

#include <vector>

#include "zkb/domain.hpp"
#include "zkb/flux.hpp"
#include "zkb/linear.hpp"
#include "zkb/trajectory.hpp"

namespace zkb {

enum class Scheme { etd2, picard };

struct StepperConfig {
  Scheme scheme = Scheme::etd2;
  double dt = 1e-3;
  double picard_tol = 1e-12;
  int picard_max_iter = 50;
  bool dealias = true;
  /// Blowup guard: L2 norm may not exceed this multiple of the initial norm.
  double blowup_factor = 1e6;

  /// Throws ConfigError unless dt > 0, picard_tol > 0, picard_max_iter >= 2.
  void validate() const;
};

/// What simulate() keeps besides the per-step diagnostics.
struct RecordOptions {
  int snapshot_stride = 0;  // 0: first and last state only
  DiagnosticsLevel level = DiagnosticsLevel::basic;
};

/// Coefficients of -(g(u))_x, formed pseudospectrally (synthesize u on the
/// grid, apply g pointwise, analyze, multiply by -i xi). With dealiasing the
/// result is truncated to the 2/3-rule mask. Throws InvalidInput if u has
/// non-finite grid values.
SpectralField nonlinear_term(const SpectralField& u, const RegularizedFlux& flux, const StepperConfig& cfg,
                             const DomainConfig& d);

/// Second-order exponential time differencing (Cox-Matthews ETD2RK):
///   a   = e^{m dt} u + dt phi1 N(u)
///   u'  = a + dt phi2 (N(a) - N(u))
class Etd2Stepper {
 public:
  Etd2Stepper(const DomainConfig& d, const StepperConfig& cfg, RegularizedFlux flux);

  /// One step. Throws NumericalBlowup if the result is non-finite.
  SpectralField step(const SpectralField& u, double t = 0.0) const;

  const ExponentialWeights& weights() const noexcept { return weights_; }

 private:
  const DomainConfig* d_;
  StepperConfig cfg_;
  RegularizedFlux flux_;
  ExponentialWeights weights_;
};

SpectralField etd2_step(const SpectralField& u, const StepperConfig& cfg, const RegularizedFlux& flux,
                        const SymbolTable& S, const DomainConfig& d);

/// Fixed point of v -> S(t) u0 + Duhamel[N(v)] on [0, t0], iterated on the
/// time grid of step cfg.dt.
struct PicardResult {
  SpectralField solution;            // v(t0)
  std::vector<double> differences;   // max_k ||v_n(t_k) - v_{n-1}(t_k)||_{L2}, one per iteration
  std::vector<double> ratios;        // differences[n+1] / differences[n]
  int iterations = 0;
};

/// Throws ContractionFailure if the successive difference is still above
/// cfg.picard_tol after cfg.picard_max_iter iterations.
PicardResult picard_solve(const SpectralField& u0, double t0, const StepperConfig& cfg, const RegularizedFlux& flux,
                          const SymbolTable& S, const DomainConfig& d);

/// Integrals of one state (norms, dissipation rates, nonlinear flux and, for
/// DiagnosticsLevel::full, the cubic and source terms of the energy identities).
StepDiagnostics measure(const SpectralField& u, const RegularizedFlux& flux, DiagnosticsLevel level,
                        const DomainConfig& d, double t);

/// Runs the selected scheme from u0 to T, recording diagnostics every step.
/// When the blowup guard trips, the returned trajectory ends at the offending
/// step and carries blowup_time.
Trajectory simulate(const GridField& u0, double T, const StepperConfig& cfg, const RegularizedFlux& flux,
                    const DomainConfig& d, const RecordOptions& rec = {});

/// Spectral-input variant.
Trajectory simulate(const SpectralField& u0, double T, const StepperConfig& cfg, const RegularizedFlux& flux,
                    const DomainConfig& d, const RecordOptions& rec = {});

}  // namespace zkb
