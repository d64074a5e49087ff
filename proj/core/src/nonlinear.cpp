#include "zkb/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zkb/error.hpp"
#include "zkb/quadrature.hpp"

namespace zkb {

void StepperConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("stepper dt must be positive");
  if (!(picard_tol > 0.0)) throw ConfigError("picard_tol must be positive");
  if (picard_max_iter < 2) throw ConfigError("picard_max_iter must be at least 2");
  if (!(blowup_factor > 1.0)) throw ConfigError("blowup_factor must exceed 1");
}

namespace {

double l2_norm(const SpectralField& u, const DomainConfig& d) { return std::sqrt(quadratic_form(u, d, weights::mass)); }

double l2_distance(const SpectralField& a, const SpectralField& b, const DomainConfig& d) {
  double acc = 0.0;
  auto p = a.coeffs();
  auto q = b.coeffs();
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::norm(p[i] - q[i]);
  return std::sqrt(d.parseval_weight() * acc);
}

// -i xi F[g(u)], Nyquist column dropped, optionally 2/3-truncated.
SpectralField flux_derivative(const GridField& u, const RegularizedFlux& flux, bool dealias, const DomainConfig& d) {
  GridField g(d);
  auto src = u.values();
  auto dst = g.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = flux(src[i]);
  SpectralField out(d);
  detail::forward_real(g, d, out);
  for (int jx = 0; jx < d.nx(); ++jx) {
    const Complex factor(0.0, -d.xi(jx));
    for (int l = 1; l <= d.ny(); ++l) {
      if (d.is_nyquist(jx) || (dealias && !d.retained(jx, l))) {
        out(jx, l) = Complex{};
      } else {
        out(jx, l) *= factor;
      }
    }
  }
  return out;
}

double grid_dot(const GridField& a, const GridField& b, const DomainConfig& d) {
  double acc = 0.0;
  auto p = a.values();
  auto q = b.values();
  for (std::size_t i = 0; i < p.size(); ++i) acc += p[i] * q[i];
  return d.cell_area() * acc;
}

}  // namespace

SpectralField nonlinear_term(const SpectralField& u, const RegularizedFlux& flux, const StepperConfig& cfg,
                             const DomainConfig& d) {
  require_shape(u, d);
  if (flux.kind() == RegularizedFlux::Kind::zero) return SpectralField(d);
  GridField ug(d);
  detail::inverse_real(u, d, ug);
  if (!ug.all_finite()) throw InvalidInput("nonlinear_term: non-finite grid values");
  return flux_derivative(ug, flux, cfg.dealias, d);
}

Etd2Stepper::Etd2Stepper(const DomainConfig& d, const StepperConfig& cfg, RegularizedFlux flux)
    : d_(&d), cfg_(cfg), flux_(flux), weights_(SymbolTable(d), cfg.dt) {
  cfg_.validate();
}

namespace {
SpectralField etd2_advance(const SpectralField& u, const SpectralField& nu, const ExponentialWeights& w,
                           const RegularizedFlux& flux, const StepperConfig& cfg, const DomainConfig& d) {
  SpectralField a = w.advance(u, nu, nu);
  const SpectralField na = nonlinear_term(a, flux, cfg, d);
  auto c = a.coeffs();
  auto p = nu.coeffs();
  auto q = na.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += w.w2(i) * (q[i] - p[i]);
  return a;
}
}  // namespace

SpectralField Etd2Stepper::step(const SpectralField& u, double t) const {
  try {
    SpectralField out = etd2_advance(u, nonlinear_term(u, flux_, cfg_, *d_), weights_, flux_, cfg_, *d_);
    if (!out.all_finite()) throw InvalidInput("non-finite coefficients");
    return out;
  } catch (const InvalidInput& e) {
    throw NumericalBlowup(t, std::string("ETD2 step produced non-finite values (") + e.what() +
                                 "); the exact solution stays bounded, so reduce dt");
  }
}

SpectralField etd2_step(const SpectralField& u, const StepperConfig& cfg, const RegularizedFlux& flux,
                        const SymbolTable& S, const DomainConfig& d) {
  cfg.validate();
  const ExponentialWeights w(S, cfg.dt);
  try {
    SpectralField out = etd2_advance(u, nonlinear_term(u, flux, cfg, d), w, flux, cfg, d);
    if (!out.all_finite()) throw InvalidInput("non-finite coefficients");
    return out;
  } catch (const InvalidInput& e) {
    throw NumericalBlowup(0.0, std::string("ETD2 step produced non-finite values (") + e.what() + ")");
  }
}

PicardResult picard_solve(const SpectralField& u0, double t0, const StepperConfig& cfg, const RegularizedFlux& flux,
                          const SymbolTable& S, const DomainConfig& d) {
  cfg.validate();
  require_shape(u0, d);
  if (!(t0 > 0.0)) throw ConfigError("picard_solve: t0 must be positive");
  const int n = std::max(1, static_cast<int>(std::lround(t0 / cfg.dt)));
  const double h = t0 / n;
  const ExponentialWeights w(S, h);

  std::vector<SpectralField> v;
  v.reserve(static_cast<std::size_t>(n) + 1);
  v.push_back(u0);
  for (int k = 0; k < n; ++k) v.push_back(w.propagate(v.back()));

  PicardResult res;
  std::vector<SpectralField> forcing(v.size());
  for (int it = 1; it <= cfg.picard_max_iter; ++it) {
    try {
      for (std::size_t k = 0; k < v.size(); ++k) forcing[k] = nonlinear_term(v[k], flux, cfg, d);
    } catch (const InvalidInput&) {
      throw ContractionFailure("contraction failed, reduce t0: iterate became non-finite");
    }
    auto next = detail::duhamel_march(u0, forcing, w);
    double diff = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) diff = std::max(diff, l2_distance(next[k], v[k], d));
    if (!std::isfinite(diff)) throw ContractionFailure("contraction failed, reduce t0: iterate became non-finite");
    if (!res.differences.empty()) res.ratios.push_back(res.differences.back() > 0.0 ? diff / res.differences.back() : 0.0);
    res.differences.push_back(diff);
    v = std::move(next);
    res.iterations = it;
    if (diff < cfg.picard_tol) {
      res.solution = std::move(v.back());
      return res;
    }
  }
  std::ostringstream os;
  os << "contraction failed, reduce t0: successive difference " << res.differences.back() << " after "
     << cfg.picard_max_iter << " iterations (t0 = " << t0 << ")";
  throw ContractionFailure(os.str());
}

StepDiagnostics measure(const SpectralField& u, const RegularizedFlux& flux, DiagnosticsLevel level,
                        const DomainConfig& d, double t) {
  StepDiagnostics s = spectral_diagnostics(u, d, t);
  GridField ug(d);
  detail::inverse_real(u, d, ug);
  s.max_abs = ug.max_abs();
  const GridField ux = partial_derivative(u, 1, 0, d);
  {
    double acc = 0.0;
    auto p = ug.values();
    auto q = ux.values();
    for (std::size_t i = 0; i < p.size(); ++i) acc += flux(p[i]) * q[i];
    s.nonlin_flux = d.cell_area() * acc;
  }
  if (level == DiagnosticsLevel::basic) return s;

  const SpectralField nu = flux.kind() == RegularizedFlux::Kind::zero
                               ? SpectralField(d)
                               : flux_derivative(ug, flux, true, d);
  s.grad_source = 2.0 * bilinear_form(nu, u, d, weights::grad);
  s.hess_source = 2.0 * bilinear_form(nu, u, d, weights::hess);

  GridField u2(d);
  {
    auto p = ug.values();
    auto q = u2.values();
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[i] * p[i];
  }
  s.cubic = grid_dot(u2, ug, d);
  GridField lap = partial_derivative(u, 2, 0, d);
  {
    const GridField uyy = partial_derivative(u, 0, 2, d);
    auto p = lap.values();
    auto q = uyy.values();
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += q[i];
  }
  s.cubic_diss = grid_dot(u2, lap, d);
  // u_xxx + u_xyy - N(u) on the grid.
  SpectralField disp(d);
  for (int jx = 0; jx < d.nx(); ++jx) {
    const double xi = d.xi(jx);
    const double scale = d.is_nyquist(jx) ? 0.0 : 1.0;
    for (int l = 1; l <= d.ny(); ++l) {
      disp(jx, l) = scale * Complex(0.0, -(xi * xi * xi + xi * d.lambda(l))) * u(jx, l) - nu(jx, l);
    }
  }
  GridField dg(d);
  detail::inverse_real(disp, d, dg);
  s.cubic_source = grid_dot(u2, dg, d);
  return s;
}

namespace {

SpectralField picard_step(const SpectralField& u, const SpectralField& nu, const ExponentialWeights& w,
                          const RegularizedFlux& flux, const StepperConfig& cfg, const DomainConfig& d, int& iters) {
  // Fixed point of u' = e u + w1 N(u) + w2 (N(u') - N(u)), started from the ETD2 value.
  SpectralField cur = etd2_advance(u, nu, w, flux, cfg, d);
  const double scale = std::max(1.0, l2_norm(u, d));
  for (iters = 1; iters <= cfg.picard_max_iter; ++iters) {
    SpectralField next = w.advance(u, nu, nonlinear_term(cur, flux, cfg, d));
    const double diff = l2_distance(next, cur, d);
    cur = std::move(next);
    if (!std::isfinite(diff)) throw InvalidInput("non-finite Picard iterate");
    if (diff <= cfg.picard_tol * scale) return cur;
  }
  throw ContractionFailure("contraction failed, reduce dt: implicit step did not converge within picard_max_iter");
}

}  // namespace

Trajectory simulate(const SpectralField& u0_in, double T, const StepperConfig& cfg, const RegularizedFlux& flux,
                    const DomainConfig& d, const RecordOptions& rec) {
  cfg.validate();
  require_shape(u0_in, d);
  if (!u0_in.all_finite()) throw InvalidInput("simulate: initial data not finite");
  if (rec.snapshot_stride < 0) throw ConfigError("snapshot_stride must be non-negative");
  const int n = detail::step_count(T, cfg.dt);
  const double h = T / n;
  const SymbolTable S(d);
  const ExponentialWeights w(S, h);

  SpectralField u = u0_in;
  if (cfg.dealias) apply_dealias(u, d);

  Trajectory traj;
  traj.dt = h;
  traj.level = rec.level;
  traj.diagnostics.reserve(static_cast<std::size_t>(n) + 1);
  traj.diagnostics.push_back(measure(u, flux, rec.level, d, 0.0));
  traj.snapshot_times.push_back(0.0);
  traj.snapshots.push_back(u);
  const double l2_0 = traj.diagnostics.front().l2();
  const double guard = cfg.blowup_factor * l2_0;

  for (int k = 1; k <= n; ++k) {
    const double t = k * h;
    int iters = 1;
    try {
      const SpectralField nu = nonlinear_term(u, flux, cfg, d);
      if (cfg.scheme == Scheme::etd2) {
        u = etd2_advance(u, nu, w, flux, cfg, d);
      } else {
        u = picard_step(u, nu, w, flux, cfg, d, iters);
      }
      if (!u.all_finite()) throw InvalidInput("non-finite coefficients");
    } catch (const InvalidInput& e) {
      traj.blowup_time = t;
      traj.blowup_message = std::string("non-finite values at t = ") + std::to_string(t) +
                            "; the exact flow is global, so this is a numerical instability: reduce dt";
      return traj;
    }
    StepDiagnostics diag = measure(u, flux, rec.level, d, t);
    diag.step_iters = iters;
    traj.diagnostics.push_back(diag);
    const bool stored = (rec.snapshot_stride > 0 && k % rec.snapshot_stride == 0) || k == n;
    if (stored) {
      traj.snapshot_times.push_back(t);
      traj.snapshots.push_back(u);
    }
    if (l2_0 > 0.0 && diag.l2() > guard) {
      if (!stored) {
        traj.snapshot_times.push_back(t);
        traj.snapshots.push_back(u);
      }
      std::ostringstream os;
      os << "L2 norm " << diag.l2() << " exceeded " << cfg.blowup_factor << " x initial norm at t = " << t
         << "; the exact flow is global, so this is a numerical instability: reduce dt";
      traj.blowup_time = t;
      traj.blowup_message = os.str();
      return traj;
    }
  }
  return traj;
}

Trajectory simulate(const GridField& u0, double T, const StepperConfig& cfg, const RegularizedFlux& flux,
                    const DomainConfig& d, const RecordOptions& rec) {
  require_shape(u0, d);
  if (!u0.all_finite()) throw InvalidInput("simulate: initial data not finite");
  return simulate(to_spectral(u0, d), T, cfg, flux, d, rec);
}

}  // namespace zkb
