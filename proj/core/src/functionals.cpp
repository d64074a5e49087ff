#include "zkb/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "zkb/error.hpp"
#include "zkb/quadrature.hpp"

namespace zkb {

NormSpec NormSpec::full_hs(double s) {
  if (!(s >= 0.0 && s <= 2.0)) {
    std::ostringstream os;
    os << "Sobolev exponent s must lie in [0, 2], got " << s;
    throw ConfigError(os.str());
  }
  NormSpec n;
  n.kind = Kind::full;
  n.s = s;
  return n;
}

NormSpec NormSpec::seminorm_k(int k) {
  if (k < 1 || k > 3) throw ConfigError("seminorm order k must be 1, 2 or 3");
  NormSpec n;
  n.kind = Kind::seminorm;
  n.k = k;
  return n;
}

std::string NormSpec::label() const {
  std::ostringstream os;
  if (kind == Kind::full) {
    os << "H^" << s;
  } else {
    os << "|D^" << k << "|";
  }
  return os.str();
}

double NormSpec::weight(double xi2, double lam) const {
  if (kind == Kind::full) {
    const double base = 1.0 + xi2 + lam;
    if (s == 0.0) return 1.0;
    if (s == 1.0) return base;
    if (s == 2.0) return base * base;
    return std::pow(base, s);
  }
  double acc = 0.0;
  for (int k1 = 0; k1 <= k; ++k1) acc += std::pow(xi2, k1) * std::pow(lam, k - k1);
  return acc;
}

double norm(const SpectralField& u, const NormSpec& spec, const DomainConfig& d) {
  require_shape(u, d);
  if (spec.kind == NormSpec::Kind::full && !(spec.s >= 0.0 && spec.s <= 2.0)) {
    throw ConfigError("Sobolev exponent s must lie in [0, 2]");
  }
  if (spec.kind == NormSpec::Kind::seminorm && (spec.k < 1 || spec.k > 3)) {
    throw ConfigError("seminorm order k must be 1, 2 or 3");
  }
  return std::sqrt(quadratic_form(u, d, [&](double xi2, double lam) { return spec.weight(xi2, lam); }));
}

SteklovResult steklov_check(const SpectralField& u, const DomainConfig& d) {
  require_shape(u, d);
  // Per-mode sums, so lhs - rhs = XL sum (lambda_l - lambda_1)|c|^2 is formed without cancellation.
  SteklovResult r;
  double lhs = 0.0, rhs = 0.0, margin = 0.0;
  for (int jx = 0; jx < d.nx(); ++jx) {
    for (int l = 1; l <= d.ny(); ++l) {
      const double a = std::norm(u(jx, l));
      lhs += d.lambda(l) * a;
      rhs += d.lambda1() * a;
      margin += (d.lambda(l) - d.lambda1()) * a;
    }
  }
  r.lhs = d.parseval_weight() * lhs;
  r.rhs = d.parseval_weight() * rhs;
  r.margin = d.parseval_weight() * margin;
  return r;
}

namespace {

// Pointwise |D^m u| on the grid with wall rows.
GridField gradient_magnitude(const SpectralField& u, int m, const DomainConfig& d) {
  GridField acc(d.nx(), d.ny() + 2);
  for (int k1 = 0; k1 <= m; ++k1) {
    const GridField p = partial_derivative_with_walls(u, k1, m - k1, d);
    auto a = acc.values();
    auto b = p.values();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i] * b[i];
  }
  for (double& v : acc.values()) v = std::sqrt(v);
  return acc;
}

double lq_norm_with_walls(const GridField& f, double q, const DomainConfig& d) {
  const double dx = 2.0 * d.X() / d.nx();
  const double dy = d.L() / (d.ny() + 1);
  double acc = 0.0;
  for (int i = 0; i < f.nx(); ++i) {
    for (int k = 0; k < f.ny(); ++k) {
      const double w = (k == 0 || k == f.ny() - 1) ? 0.5 : 1.0;
      acc += w * std::pow(std::abs(f(i, k)), q);
    }
  }
  return std::pow(dx * dy * acc, 1.0 / q);
}

}  // namespace

InterpolationRatio interpolation_ratio(const SpectralField& u, int m, int k, double q, const DomainConfig& d) {
  require_shape(u, d);
  if (k < 1 || k > 3 || m < 0 || m >= k || m > 2) {
    std::ostringstream os;
    os << "interpolation_ratio: need 1 <= k <= 3 and 0 <= m < k, got m = " << m << ", k = " << k;
    throw ConfigError(os.str());
  }
  if (!(q >= 2.0) || !std::isfinite(q)) throw ConfigError("interpolation_ratio: q must be finite and >= 2");
  InterpolationRatio r;
  r.s = (m + 1.0) / (2.0 * k) - 1.0 / (k * q);
  if (r.s < 0.0 || r.s > 0.5) {
    std::ostringstream os;
    os << "interpolation_ratio: exponent s = " << r.s << " outside [0, 1/2] for (m, k, q) = (" << m << ", " << k
       << ", " << q << ")";
    throw ConfigError(os.str());
  }
  r.lq_norm = lq_norm_with_walls(gradient_magnitude(u, m, d), q, d);
  r.dk_norm = norm(u, NormSpec::seminorm_k(k), d);
  r.l2_norm = norm(u, NormSpec::l2(), d);
  if (r.l2_norm == 0.0) return r;
  const double main = std::pow(r.dk_norm, 2.0 * r.s) * std::pow(r.l2_norm, 1.0 - 2.0 * r.s);
  r.ratio = r.lq_norm / (main + r.l2_norm);
  r.ratio_homogeneous = main > 0.0 ? r.lq_norm / main : std::numeric_limits<double>::infinity();
  return r;
}

std::string identity_name(NonlinearIdentity which) {
  switch (which) {
    case NonlinearIdentity::mass_3_3:
      return "mass_3_3";
    case NonlinearIdentity::h1_3_15:
      return "h1_3_15";
    case NonlinearIdentity::combined_3_23:
      return "combined_3_23";
    case NonlinearIdentity::h2_3_29:
      return "h2_3_29";
  }
  return "unknown";
}

NonlinearIdentity parse_identity(const std::string& name) {
  for (auto w : {NonlinearIdentity::mass_3_3, NonlinearIdentity::h1_3_15, NonlinearIdentity::combined_3_23,
                 NonlinearIdentity::h2_3_29}) {
    if (identity_name(w) == name) return w;
  }
  throw ConfigError("unknown identity '" + name + "' (expected mass_3_3, h1_3_15, combined_3_23 or h2_3_29)");
}

EnergyReport audit_identity(const Trajectory& traj, NonlinearIdentity which, const DomainConfig& d) {
  const std::size_t n = traj.diagnostics.size();
  if (n < 3) throw InsufficientData("identity audit needs at least two steps");
  if (which != NonlinearIdentity::mass_3_3 && traj.level != DiagnosticsLevel::full) {
    throw InsufficientData("identity " + identity_name(which) +
                           " needs full diagnostics (cubic and source terms); rerun with full diagnostics");
  }
  const double delta = d.delta();
  std::vector<double> t(n), energy(n), diss(n), source(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = traj.diagnostics[k];
    t[k] = s.t;
    switch (which) {
      case NonlinearIdentity::mass_3_3:
        energy[k] = s.mass;
        diss[k] = 2.0 * delta * s.grad;
        source[k] = 0.0;
        break;
      case NonlinearIdentity::h1_3_15:
        energy[k] = s.grad;
        diss[k] = 2.0 * delta * s.grad_diss;
        source[k] = s.grad_source;
        break;
      case NonlinearIdentity::combined_3_23:
        energy[k] = s.grad - s.cubic / 3.0;
        diss[k] = 2.0 * delta * s.grad_diss + delta * s.cubic_diss;
        source[k] = 0.0;
        break;
      case NonlinearIdentity::h2_3_29:
        energy[k] = s.hess;
        diss[k] = 2.0 * delta * s.hess_diss;
        source[k] = s.hess_source;
        break;
    }
  }
  const auto idiss = cumulative_trapezoid(t, diss);
  const auto isrc = cumulative_trapezoid(t, source);
  EnergyReport rep;
  rep.identity = identity_name(which);
  rep.dt = traj.dt;
  rep.times = t;
  rep.residuals.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    rep.residuals[k] = std::abs(energy[k] + idiss[k] - energy[0] - isrc[k]);
    rep.max_residual = std::max(rep.max_residual, rep.residuals[k]);
    rep.scale = std::max({rep.scale, std::abs(energy[k]), std::abs(idiss[k]), std::abs(isrc[k])});
  }
  return rep;
}

DecayFit fit_log_slope(const std::vector<double>& t, const std::vector<double>& norms, double t_begin, double t_end,
                       const std::string& label) {
  if (t.size() != norms.size()) throw InvalidInput("fit_log_slope: sample counts differ");
  if (!(t_begin < t_end)) throw ConfigError("decay window must satisfy t_begin < t_end");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_begin - 1e-12 || t[i] > t_end + 1e-12) continue;
    if (!(norms[i] > 0.0) || !std::isfinite(std::log(norms[i]))) {
      std::ostringstream os;
      os << "norm underflow at t = " << t[i] << " (" << label << ")";
      throw InsufficientData(os.str());
    }
    x.push_back(t[i]);
    y.push_back(std::log(norms[i]));
  }
  if (x.size() < 10) {
    std::ostringstream os;
    os << "decay fit needs at least 10 samples in [" << t_begin << ", " << t_end << "], got " << x.size();
    throw InsufficientData(os.str());
  }
  const double nx = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= nx;
  my /= nx;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  DecayFit f;
  f.t_begin = t_begin;
  f.t_end = t_end;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss += e * e;
  }
  f.residual = std::sqrt(ss / nx);
  f.samples = x.size();
  f.norm_label = label;
  return f;
}

DecayFit decay_fit(const Trajectory& traj, const NormSpec& spec, const DomainConfig& d,
                   std::optional<std::pair<double, double>> window) {
  if (traj.snapshots.empty()) throw InsufficientData("decay fit needs snapshots");
  const double T = traj.snapshot_times.back();
  const auto [a, b] = window.value_or(std::make_pair(0.2 * T, T));
  std::vector<double> t, v;
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const double ti = traj.snapshot_times[i];
    if (ti < a - 1e-12 || ti > b + 1e-12) continue;
    t.push_back(ti);
    v.push_back(norm(traj.snapshots[i], spec, d));
  }
  return fit_log_slope(t, v, a, b, spec.label());
}

namespace {
ThresholdReport monotone_after(const Trajectory& traj, double threshold, double slack,
                               double (*level)(const StepDiagnostics&), double (*functional)(const StepDiagnostics&)) {
  ThresholdReport r;
  r.threshold = threshold;
  std::size_t start = traj.diagnostics.size();
  for (std::size_t k = 0; k < traj.diagnostics.size(); ++k) {
    if (level(traj.diagnostics[k]) <= threshold) {
      start = k;
      r.time = traj.diagnostics[k].t;
      break;
    }
  }
  for (std::size_t k = start + 1; k < traj.diagnostics.size(); ++k) {
    const double prev = functional(traj.diagnostics[k - 1]);
    const double cur = functional(traj.diagnostics[k]);
    const double inc = prev > 0.0 ? (cur - prev) / prev : (cur > 0.0 ? 1.0 : 0.0);
    if (inc > slack) ++r.violations;
    r.worst_increase = std::max(r.worst_increase, inc);
  }
  return r;
}
}  // namespace

ThresholdReport threshold_time(const Trajectory& traj, double c1, const DomainConfig& d, double slack) {
  if (!(c1 > 0.0)) throw ConfigError("c1 must be positive");
  const double pi2 = M_PI * M_PI;
  const double thr = std::min(d.delta() / (2.0 * c1), d.delta() * pi2 / (2.0 * c1 * d.L() * d.L()));
  return monotone_after(
      traj, thr, slack, [](const StepDiagnostics& s) { return s.mass; },
      [](const StepDiagnostics& s) { return s.grad + s.mass; });
}

ThresholdReport threshold_time_h2(const Trajectory& traj, double c1, double c2, const DomainConfig& d,
                                  double slack) {
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw ConfigError("c1 and c2 must be positive");
  const double pi2 = M_PI * M_PI;
  const double thr = std::min({d.delta() / (2.0 * c1), d.delta() * pi2 / (2.0 * c1 * d.L() * d.L()),
                               d.delta() / (2.0 * c2)});
  return monotone_after(
      traj, thr, slack, [](const StepDiagnostics& s) { return s.grad + s.mass; },
      [](const StepDiagnostics& s) { return s.hess + s.grad + s.mass; });
}

CalibrationSample calibration_sample(const SpectralField& u, const DomainConfig& d) {
  require_shape(u, d);
  CalibrationSample c;
  const double mass = quadratic_form(u, d, weights::mass);
  if (mass == 0.0) return c;
  const double grad = quadratic_form(u, d, weights::grad);
  const double hess = quadratic_form(u, d, weights::hess);

  GridField ug(d);
  detail::inverse_real(u, d, ug);
  const GridField ux = partial_derivative(u, 1, 0, d);
  const GridField uxx = partial_derivative(u, 2, 0, d);
  const GridField uyy = partial_derivative(u, 0, 2, d);
  double quartic = 0.0, cubic_term = 0.0;
  for (std::size_t i = 0; i < ug.size(); ++i) {
    const double v = ug.values()[i];
    quartic += v * v * v * v;
    cubic_term += v * ux.values()[i] * (uxx.values()[i] + uyy.values()[i]);
  }
  quartic *= d.cell_area();
  cubic_term *= d.cell_area();

  // hess source with the quadratic flux: 2 <N(u), u>_{|D^2|}, N = -P i xi F[u^2/2].
  GridField half_sq(d);
  for (std::size_t i = 0; i < ug.size(); ++i) half_sq.values()[i] = 0.5 * ug.values()[i] * ug.values()[i];
  SpectralField nu(d);
  detail::forward_real(half_sq, d, nu);
  for (int jx = 0; jx < d.nx(); ++jx) {
    for (int l = 1; l <= d.ny(); ++l) {
      nu(jx, l) = (d.is_nyquist(jx) || !d.retained(jx, l)) ? Complex{} : Complex(0.0, -d.xi(jx)) * nu(jx, l);
    }
  }
  const double hess_source = 2.0 * bilinear_form(nu, u, d, weights::hess);

  c.c_square = quartic / ((grad + mass) * mass);
  c.c1 = std::abs(cubic_term) / ((hess + mass) * mass);
  c.c2 = hess > 0.0 ? std::abs(hess_source) / ((grad + mass) * hess) : 0.0;
  return c;
}

}  // namespace zkb
