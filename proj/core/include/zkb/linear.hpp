#pragma once

// Exact solution operator of the linear problem
//
//   u_t + u_xxx + u_xyy - delta (u_xx + u_yy) = f,   u = 0 at y = 0, L,
//
// which is diagonal in the Fourier x sine basis with multiplier
// m(j, l) = i (xi^3 + xi lambda) - delta (xi^2 + lambda).

#include <functional>
#include <span>
#include <vector>

#include "zkb/domain.hpp"
#include "zkb/energy_report.hpp"
#include "zkb/trajectory.hpp"

namespace zkb {

/// Per-mode multiplier table. The Nyquist column (no conjugate partner)
/// keeps only its real part so that real fields stay real.
class SymbolTable {
 public:
  explicit SymbolTable(const DomainConfig& d);

  Complex operator()(int jx, int l) const noexcept { return m_[static_cast<std::size_t>(jx) * ny_ + (l - 1)]; }
  std::span<const Complex> values() const noexcept { return m_; }
  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  /// delta * pi^2 / L^2 = -Re m(0, 1), the slowest decay rate.
  double slowest_rate() const noexcept { return slowest_rate_; }

 private:
  int nx_;
  int ny_;
  double slowest_rate_;
  std::vector<Complex> m_;
};

SymbolTable symbol(const DomainConfig& d);

/// (e^z - 1) / z, series for |z| < 1/2.
Complex phi1(Complex z);
/// (e^z - 1 - z) / z^2, series for |z| < 1/2.
Complex phi2(Complex z);
/// (e^z - 1 - z - z^2/2) / z^3, series for |z| < 1/2.
Complex phi3(Complex z);

/// Multiplies every coefficient by exp(m t). Throws ConfigError for t < 0.
SpectralField apply_semigroup(const SpectralField& u, double t, const SymbolTable& S);

/// Precomputed exp(z) and dt*phi_k(z), k = 1, 2, 3, with z = m dt.
class ExponentialWeights {
 public:
  ExponentialWeights(const SymbolTable& S, double dt);

  double dt() const noexcept { return dt_; }
  const Complex& decay(std::size_t i) const noexcept { return e_[i]; }
  const Complex& w1(std::size_t i) const noexcept { return w1_[i]; }
  const Complex& w2(std::size_t i) const noexcept { return w2_[i]; }
  const Complex& w3(std::size_t i) const noexcept { return w3_[i]; }

  /// exp(m dt) u + dt [phi1 f0 + phi2 (f1 - f0)]: exact when the forcing
  /// is linear in time across the step.
  SpectralField advance(const SpectralField& u, const SpectralField& f0, const SpectralField& f1) const;
  /// Same for forcing quadratic in time through f0, fm, f1 at the start,
  /// midpoint and end of the step.
  SpectralField advance(const SpectralField& u, const SpectralField& f0, const SpectralField& fm,
                        const SpectralField& f1) const;
  /// exp(m dt) u
  SpectralField propagate(const SpectralField& u) const;

 private:
  double dt_;
  std::vector<Complex> e_;
  std::vector<Complex> w1_;
  std::vector<Complex> w2_;
  std::vector<Complex> w3_;
};

namespace detail {
/// Marches the Duhamel integral through forcing samples at t_k = k dt.
std::vector<SpectralField> duhamel_march(const SpectralField& u0, std::span<const SpectralField> forcing,
                                         const ExponentialWeights& w);
/// Number of steps of size dt in T. Throws ConfigError unless dt > 0, T > 0
/// and dt divides T to 1e-9 relative.
int step_count(double T, double dt);
}  // namespace detail

/// Forced linear solve on [0, T]. `forcing` holds T/dt + 1 samples at the
/// step boundaries; the forcing is taken linear in time on every step.
/// Every step is stored as a snapshot together with its forcing sample.
/// Throws ConfigError (dt <= 0, dt not dividing T, wrong sample count) or
/// InvalidInput (non-finite forcing).
Trajectory duhamel_solve(const SpectralField& u0, std::span<const SpectralField> forcing, double T, double dt,
                         const SymbolTable& S, const DomainConfig& d);

/// Same, sampling `forcing(t)` at the step boundaries and midpoints and
/// taking it quadratic in time on every step. Only boundary samples are stored.
Trajectory duhamel_solve(const SpectralField& u0, const std::function<SpectralField(double)>& forcing, double T,
                         double dt, const SymbolTable& S, const DomainConfig& d);

enum class LinearIdentity { mass, grad, hess };

/// f = f0 + d/dx f1, sampled like the trajectory. Empty members mean zero;
/// if both are empty the trajectory's own forcing is used as f0.
struct ForcingDecomposition {
  std::vector<SpectralField> f0;
  std::vector<SpectralField> f1;
};

/// Residual of the linear energy identity for the L2 (mass), H1 (grad) or
/// H2 (hess) level, with spectral space quadrature and trapezoidal time
/// quadrature. Needs every step stored and at least two steps.
EnergyReport audit_linear_identity(const Trajectory& traj, LinearIdentity which, const ForcingDecomposition& f,
                                   const DomainConfig& d);

}  // namespace zkb
