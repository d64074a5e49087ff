#include "zkb/trajectory.hpp"

#include <cmath>

#include "zkb/error.hpp"
#include "zkb/quadrature.hpp"

namespace zkb {

double StepDiagnostics::l2() const { return std::sqrt(mass); }
double StepDiagnostics::h1() const { return std::sqrt(mass + grad); }
double StepDiagnostics::h2() const { return std::sqrt(h2_full); }

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(diagnostics.size());
  for (const auto& d : diagnostics) t.push_back(d.t);
  return t;
}

StepDiagnostics spectral_diagnostics(const SpectralField& u, const DomainConfig& d, double t) {
  StepDiagnostics s;
  s.t = t;
  s.mass = quadratic_form(u, d, weights::mass);
  s.grad = quadratic_form(u, d, weights::grad);
  s.hess = quadratic_form(u, d, weights::hess);
  s.grad_diss = quadratic_form(u, d, weights::grad_dissipation);
  s.hess_diss = quadratic_form(u, d, weights::hess_dissipation);
  s.h2_full = quadratic_form(u, d, [](double xi2, double lam) { return (1.0 + xi2 + lam) * (1.0 + xi2 + lam); });
  return s;
}

std::vector<double> cumulative_trapezoid(std::span<const double> t, std::span<const double> v) {
  if (t.size() != v.size()) throw InvalidInput("cumulative_trapezoid: sample counts differ");
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t k = 1; k < t.size(); ++k) out[k] = out[k - 1] + 0.5 * (t[k] - t[k - 1]) * (v[k] + v[k - 1]);
  return out;
}

std::vector<DiagnosticsRow> diagnostics_table(const Trajectory& traj, double delta) {
  const auto t = traj.times();
  std::vector<double> grad, gdiss;
  grad.reserve(t.size());
  gdiss.reserve(t.size());
  for (const auto& d : traj.diagnostics) {
    grad.push_back(d.grad);
    gdiss.push_back(d.grad_diss);
  }
  const auto ig = cumulative_trapezoid(t, grad);
  const auto igd = cumulative_trapezoid(t, gdiss);
  std::vector<DiagnosticsRow> rows;
  rows.reserve(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto& d = traj.diagnostics[k];
    rows.push_back({d.t, d.l2(), d.h1(), d.h2(), 2.0 * delta * ig[k], 2.0 * delta * igd[k], d.nonlin_flux, d.step_iters});
  }
  return rows;
}

}  // namespace zkb
