#include "zkb/linear.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zkb/error.hpp"
#include "zkb/quadrature.hpp"

namespace zkb {

SymbolTable::SymbolTable(const DomainConfig& d)
    : nx_(d.nx()), ny_(d.ny()), slowest_rate_(d.delta() * d.lambda1()), m_(d.size()) {
  for (int jx = 0; jx < nx_; ++jx) {
    const double xi = d.xi(jx);
    const double disp_scale = d.is_nyquist(jx) ? 0.0 : 1.0;
    for (int l = 1; l <= ny_; ++l) {
      const double lam = d.lambda(l);
      m_[static_cast<std::size_t>(jx) * ny_ + (l - 1)] =
          Complex(-d.delta() * (xi * xi + lam), disp_scale * (xi * xi * xi + xi * lam));
    }
  }
}

SymbolTable symbol(const DomainConfig& d) { return SymbolTable(d); }

namespace {
constexpr double kSeriesRadius = 0.5;
constexpr int kSeriesTerms = 24;

// sum_{k>=0} z^k / (k + shift)!
Complex phi_series(Complex z, int shift) {
  double fact = 1.0;
  for (int k = 2; k <= shift; ++k) fact *= k;
  Complex term = 1.0 / fact;
  Complex acc = term;
  for (int k = 1; k < kSeriesTerms; ++k) {
    term *= z / static_cast<double>(k + shift);
    acc += term;
  }
  return acc;
}
}  // namespace

Complex phi1(Complex z) {
  if (std::abs(z) < kSeriesRadius) return phi_series(z, 1);
  return (std::exp(z) - 1.0) / z;
}

Complex phi2(Complex z) {
  if (std::abs(z) < kSeriesRadius) return phi_series(z, 2);
  return (std::exp(z) - 1.0 - z) / (z * z);
}

Complex phi3(Complex z) {
  if (std::abs(z) < kSeriesRadius) return phi_series(z, 3);
  return (std::exp(z) - 1.0 - z - 0.5 * z * z) / (z * z * z);
}

SpectralField apply_semigroup(const SpectralField& u, double t, const SymbolTable& S) {
  if (!(t >= 0.0)) throw ConfigError("apply_semigroup: t must be non-negative");
  if (u.nx() != S.nx() || u.ny() != S.ny()) throw ShapeMismatch("apply_semigroup: field and symbol shapes differ");
  SpectralField out = u;
  auto c = out.coeffs();
  auto m = S.values();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= std::exp(m[i] * t);
  return out;
}

ExponentialWeights::ExponentialWeights(const SymbolTable& S, double dt) : dt_(dt) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  const auto m = S.values();
  e_.resize(m.size());
  w1_.resize(m.size());
  w2_.resize(m.size());
  w3_.resize(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Complex z = m[i] * dt;
    e_[i] = std::exp(z);
    w1_[i] = dt * phi1(z);
    w2_[i] = dt * phi2(z);
    w3_[i] = dt * phi3(z);
  }
}

SpectralField ExponentialWeights::advance(const SpectralField& u, const SpectralField& f0,
                                          const SpectralField& f1) const {
  SpectralField out = u;
  auto c = out.coeffs();
  auto a = f0.coeffs();
  auto b = f1.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = e_[i] * c[i] + w1_[i] * a[i] + w2_[i] * (b[i] - a[i]);
  return out;
}

// p(τ) = f0 + aτ + bτ² on [0, dt]; ∫ e^{m(dt-τ)} τ^k dτ = k! dt^{k+1} φ_{k+1}(m dt).
SpectralField ExponentialWeights::advance(const SpectralField& u, const SpectralField& f0, const SpectralField& fm,
                                          const SpectralField& f1) const {
  SpectralField out = u;
  auto c = out.coeffs();
  auto a = f0.coeffs();
  auto m = fm.coeffs();
  auto b = f1.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Complex slope = -3.0 * a[i] + 4.0 * m[i] - b[i];
    const Complex curve = a[i] - 2.0 * m[i] + b[i];
    c[i] = e_[i] * c[i] + w1_[i] * a[i] + w2_[i] * slope + 4.0 * w3_[i] * curve;
  }
  return out;
}

SpectralField ExponentialWeights::propagate(const SpectralField& u) const {
  SpectralField out = u;
  auto c = out.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= e_[i];
  return out;
}

namespace detail {
std::vector<SpectralField> duhamel_march(const SpectralField& u0, std::span<const SpectralField> forcing,
                                         const ExponentialWeights& w) {
  std::vector<SpectralField> out;
  out.reserve(forcing.size());
  out.push_back(u0);
  for (std::size_t k = 0; k + 1 < forcing.size(); ++k) out.push_back(w.advance(out.back(), forcing[k], forcing[k + 1]));
  return out;
}
}  // namespace detail

namespace detail {
int step_count(double T, double dt) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(T > 0.0)) throw ConfigError("T must be positive");
  const double ratio = T / dt;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-9 * n) {
    std::ostringstream os;
    os << "dt = " << dt << " does not divide T = " << T;
    throw ConfigError(os.str());
  }
  return static_cast<int>(n);
}
}  // namespace detail

Trajectory duhamel_solve(const SpectralField& u0, std::span<const SpectralField> forcing, double T, double dt,
                         const SymbolTable& S, const DomainConfig& d) {
  const int n = detail::step_count(T, dt);
  require_shape(u0, d);
  if (forcing.size() != static_cast<std::size_t>(n) + 1) {
    std::ostringstream os;
    os << "duhamel_solve: expected " << n + 1 << " forcing samples, got " << forcing.size();
    throw ConfigError(os.str());
  }
  for (const auto& f : forcing) {
    require_shape(f, d);
    if (!f.all_finite()) throw InvalidInput("duhamel_solve: forcing contains NaN or infinity");
  }
  const double h = T / n;
  ExponentialWeights w(S, h);
  Trajectory traj;
  traj.dt = h;
  traj.snapshots = detail::duhamel_march(u0, forcing, w);
  traj.forcing.assign(forcing.begin(), forcing.end());
  for (int k = 0; k <= n; ++k) {
    traj.snapshot_times.push_back(k * h);
    traj.diagnostics.push_back(spectral_diagnostics(traj.snapshots[static_cast<std::size_t>(k)], d, k * h));
  }
  return traj;
}

Trajectory duhamel_solve(const SpectralField& u0, const std::function<SpectralField(double)>& forcing, double T,
                         double dt, const SymbolTable& S, const DomainConfig& d) {
  const int n = detail::step_count(T, dt);
  require_shape(u0, d);
  const double h = T / n;
  auto sample = [&](double t) {
    SpectralField f = forcing(t);
    require_shape(f, d);
    if (!f.all_finite()) throw InvalidInput("duhamel_solve: forcing contains NaN or infinity");
    return f;
  };
  const ExponentialWeights w(S, h);
  Trajectory traj;
  traj.dt = h;
  traj.snapshots.reserve(static_cast<std::size_t>(n) + 1);
  traj.forcing.reserve(static_cast<std::size_t>(n) + 1);
  traj.snapshots.push_back(u0);
  traj.forcing.push_back(sample(0.0));
  for (int k = 0; k < n; ++k) {
    SpectralField mid = sample((k + 0.5) * h);
    traj.forcing.push_back(sample((k + 1) * h));
    const auto& f = traj.forcing;
    traj.snapshots.push_back(w.advance(traj.snapshots.back(), f[f.size() - 2], mid, f.back()));
  }
  for (int k = 0; k <= n; ++k) {
    traj.snapshot_times.push_back(k * h);
    traj.diagnostics.push_back(spectral_diagnostics(traj.snapshots[static_cast<std::size_t>(k)], d, k * h));
  }
  return traj;
}

EnergyReport audit_linear_identity(const Trajectory& traj, LinearIdentity which, const ForcingDecomposition& f,
                                   const DomainConfig& d) {
  const std::size_t n = traj.diagnostics.size();
  if (n < 3) throw InsufficientData("identity audit needs at least two steps");
  if (!traj.every_step_stored()) throw InsufficientData("linear identity audit needs a snapshot at every step");

  auto check = [&](const std::vector<SpectralField>& v, const char* name) {
    if (!v.empty() && v.size() != n) throw InsufficientData(std::string("forcing component ") + name + " has wrong length");
  };
  check(f.f0, "f0");
  check(f.f1, "f1");
  const std::vector<SpectralField>* f0 = &f.f0;
  if (f.f0.empty() && f.f1.empty() && !traj.forcing.empty()) f0 = &traj.forcing;
  if (!f0->empty() && f0->size() != n) throw InsufficientData("forcing samples do not align with the trajectory");

  double (*energy_w)(double, double) = weights::mass;
  double (*diss_w)(double, double) = weights::grad;
  EnergyReport rep;
  switch (which) {
    case LinearIdentity::mass:
      rep.identity = "linear_mass";
      break;
    case LinearIdentity::grad:
      rep.identity = "linear_grad";
      energy_w = weights::grad;
      diss_w = weights::grad_dissipation;
      break;
    case LinearIdentity::hess:
      rep.identity = "linear_hess";
      energy_w = weights::hess;
      diss_w = weights::hess_dissipation;
      break;
  }

  // f = f0 + d/dx f1 in coefficient space: f0 + i xi f1.
  auto total_forcing = [&](std::size_t k) {
    SpectralField tot(d);
    if (!f0->empty()) tot += (*f0)[k];
    if (!f.f1.empty()) {
      const auto& g = f.f1[k];
      for (int jx = 0; jx < d.nx(); ++jx) {
        for (int l = 1; l <= d.ny(); ++l) tot(jx, l) += Complex(0.0, d.xi(jx)) * g(jx, l);
      }
    }
    return tot;
  };

  std::vector<double> t(n), energy(n), diss(n), source(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& u = traj.snapshots[k];
    t[k] = traj.diagnostics[k].t;
    energy[k] = quadratic_form(u, d, energy_w);
    diss[k] = 2.0 * d.delta() * quadratic_form(u, d, diss_w);
    source[k] = 2.0 * bilinear_form(total_forcing(k), u, d, energy_w);
  }
  const auto idiss = cumulative_trapezoid(t, diss);
  const auto isrc = cumulative_trapezoid(t, source);

  rep.dt = traj.dt;
  rep.times = t;
  rep.residuals.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lhs = energy[k] + idiss[k];
    const double rhs = energy[0] + isrc[k];
    rep.residuals[k] = std::abs(lhs - rhs);
    rep.max_residual = std::max(rep.max_residual, rep.residuals[k]);
    rep.scale = std::max({rep.scale, std::abs(energy[k]), std::abs(idiss[k]), std::abs(isrc[k])});
  }
  return rep;
}

}  // namespace zkb
