#include "zkb/harness/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

#include <boost/numeric/odeint.hpp>
#include <json.hpp>

#include "zkb/error.hpp"
#include "zkb/functionals.hpp"
#include "zkb/harness/initial_data.hpp"
#include "zkb/harness/io.hpp"
#include "zkb/linear.hpp"
#include "zkb/nonlinear.hpp"

namespace zkb::harness {

using json = nlohmann::json;

bool ExperimentResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* ExperimentResult::first_failure() const {
  for (const auto& c : checks) {
    if (!c.pass) return &c;
  }
  return nullptr;
}

Tolerances tolerances(ToleranceProfile p) {
  Tolerances t;
  if (p == ToleranceProfile::strict) {
    t.semigroup_rel /= 10;
    t.semigroup_property /= 10;
    t.duhamel_rel /= 10;
    t.flux_rel /= 10;
    t.l2_monotone_slack /= 10;
    t.steklov_rel /= 10;
    t.l2_slope /= 10;
    t.eigen_slope /= 10;
    t.mass_abs /= 10;
    t.h1_slack /= 10;
    t.picard_match /= 10;
    t.fractional_slope /= 10;
  }
  return t;
}

std::string summary_json(const ExperimentResult& r, const RunConfig& cfg) {
  json j;
  j["command"] = r.command;
  j["pass"] = r.passed() && r.exit_code == kExitPass;
  j["exit_code"] = r.exit_code;
  j["message"] = r.message;
  j["tolerance_profile"] = profile_name(cfg.tolerance_profile);
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"limit", c.limit}, {"detail", c.detail}});
  }
  j["checks"] = checks;
  j["files"] = r.files;
  j["config"] = cfg.to_text();
  return j.dump(2) + "\n";
}

namespace {

std::string path_in(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

void add(ExperimentResult& r, std::string name, bool pass, double value, double limit, std::string detail = {}) {
  r.checks.push_back(Check{std::move(name), pass, value, limit, std::move(detail)});
}

void finish(ExperimentResult& r, const RunConfig& cfg) {
  if (r.exit_code == kExitPass && !r.passed()) {
    r.exit_code = kExitCheckFailure;
    if (r.message.empty()) r.message = "check failed: " + r.first_failure()->name;
  }
  const std::string p = path_in(cfg, r.command + ".json");
  r.files.push_back(p);
  write_text(p, summary_json(r, cfg));
}

double max_abs_diff(const GridField& a, const GridField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

double spectral_rel_diff(const SpectralField& a, const SpectralField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a.coeffs()[i] - b.coeffs()[i]));
    den = std::max(den, std::abs(b.coeffs()[i]));
  }
  return den > 0.0 ? num / den : num;
}

double l2_distance(const SpectralField& a, const SpectralField& b, const DomainConfig& d) {
  return norm(a - b, NormSpec::l2(), d);
}

// Per-mode forced ODE c' = m c + f(t), integrated adaptively.
Complex mode_oracle(Complex m, Complex c0, const std::function<Complex(double)>& f, double T) {
  using State = std::array<double, 2>;
  State x{c0.real(), c0.imag()};
  auto rhs = [&](const State& s, State& ds, double t) {
    const Complex v = m * Complex(s[0], s[1]) + f(t);
    ds[0] = v.real();
    ds[1] = v.imag();
  };
  namespace ode = boost::numeric::odeint;
  ode::integrate_adaptive(ode::make_controlled(1e-14, 1e-14, ode::runge_kutta_dopri5<State>()), rhs, x, 0.0, T, 1e-4);
  return {x[0], x[1]};
}

}  // namespace

ExperimentResult cmd_linear_verify(const RunConfig& cfg) {
  cfg.validate();
  ExperimentResult r;
  r.command = "linear-verify";
  ensure_directory(cfg.out_dir);
  const Tolerances tol = tolerances(cfg.tolerance_profile);
  const DomainConfig d = cfg.domain();
  const SymbolTable S(d);

  // Zero data stays zero.
  {
    const SpectralField z(d);
    const SpectralField out = apply_semigroup(z, 2.0, S);
    double m = 0.0;
    for (const auto& c : out.coeffs()) m = std::max(m, std::abs(c));
    add(r, "zero_data", m == 0.0, m, 0.0);
  }

  // Single modes against the closed-form solution on the grid.
  auto closed_form_check = [&](const std::string& name, int j, int l) {
    InitialDataSpec spec;
    spec.kind = j == 0 ? InitKind::eigenmode : InitKind::traveling_mode;
    spec.j = j;
    spec.l = l;
    spec.amplitude = 1.0;
    const SpectralField u0 = make_initial_spectrum(spec, d);
    const double xi = M_PI * j / d.X();
    const double lam = d.lambda(l);
    double worst = 0.0;
    for (double t : {0.0, 0.5, 1.0, 2.0}) {
      const GridField got = to_grid(apply_semigroup(u0, t, S), d);
      GridField want(d);
      const double decay = std::exp(-d.delta() * (xi * xi + lam) * t);
      const double phase = (xi * xi * xi + xi * lam) * t;
      for (int i = 0; i < d.nx(); ++i) {
        for (int k = 0; k < d.ny(); ++k) {
          want(i, k) = decay * std::cos(xi * d.x(i) + phase) * std::sin(M_PI * l * d.y(k) / d.L());
        }
      }
      worst = std::max(worst, max_abs_diff(got, want) / std::max(want.max_abs(), 1e-300));
    }
    add(r, name, worst <= tol.semigroup_rel, worst, tol.semigroup_rel, "relative max-norm over t in {0, 0.5, 1, 2}");
  };
  closed_form_check("eigenmode_closed_form", 0, cfg.init.l);
  closed_form_check("traveling_mode_closed_form", cfg.init.j, cfg.init.l);

  // Semigroup property on the configured initial data.
  SpectralField u0 = make_initial_spectrum(cfg.init, d);
  {
    const double e = spectral_rel_diff(apply_semigroup(apply_semigroup(u0, 0.6, S), 0.7, S), apply_semigroup(u0, 1.3, S));
    add(r, "semigroup_property", e <= tol.semigroup_property, e, tol.semigroup_property);
  }

  // Duhamel checks on a reduced spectrum of the same strip.
  const DomainConfig small = plan_domain(d.L(), d.X(), 16, 8, d.delta());
  const SymbolTable Ss(small);
  const double T = 1.0;
  {
    const int j = 1, l = 2;
    const Complex c(0.3, -0.2);
    auto forcing = [&](double) {
      SpectralField f(small);
      f.at(j, l) = c;
      f.at(-j, l) = std::conj(c);
      return f;
    };
    const Trajectory tr = duhamel_solve(SpectralField(small), forcing, T, 1e-2, Ss, small);
    const Complex m = Ss(small.storage_index(j), l);
    const Complex want = c * (std::exp(m * T) - 1.0) / m;
    const double e = std::abs(tr.snapshots.back().at(j, l) - want) / std::abs(want);
    add(r, "duhamel_constant_forcing", e <= tol.semigroup_rel, e, tol.semigroup_rel, "closed form c(e^{mT}-1)/m");
  }
  {
    // Smooth forcing: polynomial plus oscillatory terms on a few modes.
    auto amp = [](int j, int l, double t) {
      return Complex(0.2 * l + 0.1 * t * t - 0.05 * t * t * t, 0.1 * j * std::sin(3.0 * t + l));
    };
    auto forcing = [&](double t) {
      SpectralField f(small);
      for (int j = 0; j <= 2; ++j) {
        for (int l = 1; l <= 3; ++l) {
          Complex a = amp(j, l, t);
          if (j == 0) a = a.real();
          f.at(j, l) = a;
          if (j > 0) f.at(-j, l) = std::conj(a);
        }
      }
      return f;
    };
    SpectralField v0(small);
    v0.at(0, 1) = 0.5;
    v0.at(1, 2) = Complex(0.1, 0.05);
    v0.at(-1, 2) = Complex(0.1, -0.05);
    const Trajectory tr = duhamel_solve(v0, forcing, T, 1e-4, Ss, small);
    double worst = 0.0;
    for (int j = 0; j <= 2; ++j) {
      for (int l = 1; l <= 3; ++l) {
        auto fj = [&, j, l](double t) {
          Complex a = amp(j, l, t);
          return j == 0 ? Complex(a.real(), 0.0) : a;
        };
        const Complex want = mode_oracle(Ss(small.storage_index(j), l), v0.at(j, l), fj, T);
        worst = std::max(worst, std::abs(tr.snapshots.back().at(j, l) - want) / std::abs(want));
      }
    }
    add(r, "duhamel_ode_oracle", worst <= tol.duhamel_rel, worst, tol.duhamel_rel,
        "adaptive per-mode ODE oracle, dt = 1e-4 on a 16x8 spectrum");
  }
  finish(r, cfg);
  return r;
}

ExperimentResult cmd_simulate(const RunConfig& cfg) {
  cfg.validate();
  ExperimentResult r;
  r.command = "simulate";
  ensure_directory(cfg.out_dir);
  const Tolerances tol = tolerances(cfg.tolerance_profile);
  const DomainConfig d = cfg.domain();
  const GridField u0 = make_initial_data(cfg.init, d);
  const Trajectory traj = simulate(u0, cfg.t_end, cfg.stepper, cfg.flux(), d, cfg.record());

  const std::string csv = path_in(cfg, "diagnostics.csv");
  write_diagnostics_csv(csv, traj, d.delta());
  r.files.push_back(csv);
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "snapshots/snap_%06zu.zkbs", i);
    const std::string p = path_in(cfg, name);
    write_snapshot(p, to_grid(traj.snapshots[i], d));
    r.files.push_back(p);
  }
  if (traj.blowup_time) {
    r.exit_code = kExitBlowup;
    r.message = traj.blowup_message;
    add(r, "no_blowup", false, *traj.blowup_time, cfg.t_end, traj.blowup_message);
    finish(r, cfg);
    return r;
  }

  double worst_flux = 0.0, worst_l2_rise = 0.0, worst_steklov = 0.0;
  for (std::size_t k = 0; k < traj.diagnostics.size(); ++k) {
    const auto& s = traj.diagnostics[k];
    worst_flux = std::max(worst_flux, std::abs(s.nonlin_flux) / std::max(1.0, std::pow(s.l2(), 3)));
    if (k > 0) worst_l2_rise = std::max(worst_l2_rise, s.l2() - traj.diagnostics[k - 1].l2());
  }
  for (const auto& u : traj.snapshots) {
    const auto st = steklov_check(u, d);
    if (st.rhs > 0.0) worst_steklov = std::max(worst_steklov, -st.margin / st.rhs);
  }
  add(r, "flux_orthogonality", worst_flux <= tol.flux_rel, worst_flux, tol.flux_rel,
      "max |∫∫g(u)u_x| / max(1, ||u||^3)");
  add(r, "l2_monotone", worst_l2_rise <= tol.l2_monotone_slack, worst_l2_rise, tol.l2_monotone_slack);
  add(r, "steklov", worst_steklov <= tol.steklov_rel, worst_steklov, tol.steklov_rel);
  finish(r, cfg);
  return r;
}

ExperimentResult cmd_audit(const RunConfig& cfg) {
  cfg.validate();
  ExperimentResult r;
  r.command = "audit";
  ensure_directory(cfg.out_dir);
  const Tolerances tol = tolerances(cfg.tolerance_profile);
  const DomainConfig d = cfg.domain();
  std::vector<NonlinearIdentity> ids;
  for (const auto& name : cfg.identities) ids.push_back(parse_identity(name));
  if (ids.empty()) throw ConfigError("audit: no identities requested");

  const GridField u0 = make_initial_data(cfg.init, d);
  RecordOptions rec{0, DiagnosticsLevel::full};
  StepperConfig coarse = cfg.stepper, fine = cfg.stepper;
  fine.dt = coarse.dt / 2.0;
  const Trajectory tc = simulate(u0, cfg.t_end, coarse, cfg.flux(), d, rec);
  const Trajectory tf = simulate(u0, cfg.t_end, fine, cfg.flux(), d, rec);
  for (const auto* t : {&tc, &tf}) {
    if (t->blowup_time) {
      r.exit_code = kExitBlowup;
      r.message = t->blowup_message;
      add(r, "no_blowup", false, *t->blowup_time, cfg.t_end, t->blowup_message);
      finish(r, cfg);
      return r;
    }
  }

  std::ostringstream csv;
  csv << "identity,dt,t,residual\n";
  char buf[256];
  json reports = json::array();
  for (auto id : ids) {
    const EnergyReport rep = with_refinement(audit_identity(tc, id, d), audit_identity(tf, id, d));
    for (const auto* t : {&tc, &tf}) {
      const EnergyReport e = audit_identity(*t, id, d);
      for (std::size_t k = 0; k < e.times.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g\n", e.identity.c_str(), e.dt, e.times[k],
                      e.residuals[k]);
        csv << buf;
      }
    }
    const auto& ord = *rep.refinement;
    reports.push_back({{"identity", rep.identity},
                       {"max_residual_coarse", ord.residual_coarse},
                       {"max_residual_fine", ord.residual_fine},
                       {"ratio", ord.ratio},
                       {"order", ord.order},
                       {"scale", rep.scale}});
    const std::string name = rep.identity;
    if (id == NonlinearIdentity::combined_3_23) {
      // The cubic terms use grid quadrature in y, whose error does not shrink with dt.
      add(r, name + "_reported", std::isfinite(ord.residual_coarse), ord.residual_coarse, 0.0,
          "residual includes the y-quadrature error of the cubic terms; no order check");
      continue;
    }
    const bool roundoff = ord.residual_coarse <= 1e-13 * std::max(rep.scale, 1.0);
    const bool ok = roundoff || (ord.ratio >= tol.refine_ratio_lo && ord.ratio <= tol.refine_ratio_hi);
    add(r, name + "_refinement_ratio", ok, ord.ratio, tol.refine_ratio_hi,
        roundoff ? "residual at rounding level" : "max residual ratio dt / (dt/2) in [3, 5]");
    if (id == NonlinearIdentity::mass_3_3) {
      add(r, "mass_3_3_abs_residual", ord.residual_coarse <= tol.mass_abs, ord.residual_coarse, tol.mass_abs);
    }
  }
  const std::string csv_path = path_in(cfg, "audit.csv");
  write_text(csv_path, csv.str());
  const std::string json_path = path_in(cfg, "audit_reports.json");
  write_text(json_path, reports.dump(2) + "\n");
  r.files.push_back(csv_path);
  r.files.push_back(json_path);
  finish(r, cfg);
  return r;
}

ExperimentResult cmd_decay(const RunConfig& cfg) {
  cfg.validate();
  ExperimentResult r;
  r.command = "decay";
  ensure_directory(cfg.out_dir);
  const Tolerances tol = tolerances(cfg.tolerance_profile);
  const DomainConfig d = cfg.domain();
  const GridField u0 = make_initial_data(cfg.init, d);
  if (u0.max_abs() == 0.0) {
    r.message = "zero initial data: decay fit skipped";
    finish(r, cfg);
    return r;
  }
  RunConfig run = cfg;
  if (run.snapshot_stride == 0) run.snapshot_stride = 1;
  const Trajectory traj = simulate(u0, cfg.t_end, cfg.stepper, cfg.flux(), d, run.record());
  if (traj.blowup_time) {
    r.exit_code = kExitBlowup;
    r.message = traj.blowup_message;
    add(r, "no_blowup", false, *traj.blowup_time, cfg.t_end, traj.blowup_message);
    finish(r, cfg);
    return r;
  }

  std::ostringstream csv;
  csv << "t,l2,h1,h2\n";
  char buf[256];
  for (const auto& s : traj.diagnostics) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", s.t, s.l2(), s.h1(), s.h2());
    csv << buf;
  }
  const std::string csv_path = path_in(cfg, "decay.csv");
  write_text(csv_path, csv.str());
  r.files.push_back(csv_path);

  const double T = cfg.t_end;
  std::pair<double, double> window{0.2 * T, T};
  std::map<double, DecayFit> fits;
  auto fit_all = [&](std::pair<double, double> w) {
    fits.clear();
    for (double s : {0.0, 0.5, 1.0, 1.5, 2.0}) fits[s] = decay_fit(traj, NormSpec::full_hs(s), d, w);
  };
  try {
    fit_all(window);
  } catch (const InsufficientData& e) {
    if (std::string(e.what()).find("underflow") == std::string::npos) throw;
    window = {0.2 * T, 0.5 * T};
    r.message = std::string("window shrunk once after: ") + e.what();
    fit_all(window);
  }

  const double rate = d.delta() * d.lambda1();
  json table = json::array();
  for (const auto& [s, f] : fits) {
    table.push_back({{"s", s}, {"slope", f.slope}, {"residual", f.residual}, {"samples", f.samples},
                     {"t_begin", f.t_begin}, {"t_end", f.t_end}});
  }
  const std::string fit_path = path_in(cfg, "decay_fits.json");
  write_text(fit_path, table.dump(2) + "\n");
  r.files.push_back(fit_path);

  add(r, "l2_slope_bound", fits[0.0].slope <= -rate + tol.l2_slope, fits[0.0].slope, -rate + tol.l2_slope);
  if (cfg.init.kind == InitKind::eigenmode) {
    const double want = -d.delta() * d.lambda(cfg.init.l);
    const double e = std::abs(fits[0.0].slope - want);
    add(r, "eigenmode_slope", e <= tol.eigen_slope, fits[0.0].slope, want);
  }
  add(r, "h1_slope_negative", fits[1.0].slope < 0.0, fits[1.0].slope, 0.0);
  add(r, "h2_slope_negative", fits[2.0].slope < 0.0, fits[2.0].slope, 0.0);
  for (double s : {0.5, 1.5}) {
    const double lo = std::floor(s), hi = std::ceil(s), frac = s - lo;
    const double beta = -(fits[lo].slope * (1.0 - frac) + fits[hi].slope * frac);
    const double limit = -beta + tol.fractional_slope;
    std::ostringstream name;
    name << "fractional_envelope_s" << s;
    add(r, name.str(), fits[s].slope <= limit, fits[s].slope, limit);
  }
  finish(r, cfg);
  return r;
}

ExperimentResult cmd_picard(const RunConfig& cfg) {
  cfg.validate();
  ExperimentResult r;
  r.command = "picard";
  ensure_directory(cfg.out_dir);
  const Tolerances tol = tolerances(cfg.tolerance_profile);
  const DomainConfig d = cfg.domain();
  const SymbolTable S(d);
  SpectralField u0 = make_initial_spectrum(cfg.init, d);
  if (cfg.stepper.dealias) apply_dealias(u0, d);
  std::vector<double> t0s = cfg.picard_t0;
  std::sort(t0s.begin(), t0s.end());

  std::ostringstream csv;
  csv << "t0,iterations,converged,first_ratio,max_ratio,mean_ratio,etd2_distance\n";
  char buf[256];
  int converged = 0;
  double prev_mean = -1.0;
  bool increasing = true;
  for (double t0 : t0s) {
    try {
      const PicardResult pr = picard_solve(u0, t0, cfg.stepper, cfg.flux(), S, d);
      ++converged;
      double max_ratio = 0.0, mean_ratio = 0.0;
      for (double q : pr.ratios) {
        max_ratio = std::max(max_ratio, q);
        mean_ratio += q;
      }
      if (!pr.ratios.empty()) mean_ratio /= static_cast<double>(pr.ratios.size());
      StepperConfig sc = cfg.stepper;
      sc.scheme = Scheme::etd2;
      const int n = std::max(1, static_cast<int>(std::lround(t0 / sc.dt)));
      sc.dt = t0 / n;
      const Trajectory tr = simulate(u0, t0, sc, cfg.flux(), d);
      const double dist = l2_distance(pr.solution, tr.snapshots.back(), d);
      std::snprintf(buf, sizeof(buf), "%.17g,%d,1,%.17g,%.17g,%.17g,%.17g\n", t0, pr.iterations,
                    pr.ratios.empty() ? 0.0 : pr.ratios.front(), max_ratio, mean_ratio, dist);
      csv << buf;
      std::ostringstream tag;
      tag << "t0=" << t0;
      add(r, "contraction_" + tag.str(), pr.ratios.empty() || max_ratio < 1.0, max_ratio, 1.0,
          "successive-difference ratios after the first iteration");
      add(r, "etd2_match_" + tag.str(), dist <= tol.picard_match, dist, tol.picard_match);
      if (!pr.ratios.empty()) {
        if (mean_ratio < prev_mean) increasing = false;
        prev_mean = mean_ratio;
      }
    } catch (const ContractionFailure& e) {
      std::snprintf(buf, sizeof(buf), "%.17g,%d,0,nan,nan,nan,nan\n", t0, cfg.stepper.picard_max_iter);
      csv << buf;
      std::ostringstream tag;
      tag << "t0=" << t0;
      add(r, "contraction_" + tag.str(), false, 1.0, 1.0, e.what());
    }
  }
  const std::string csv_path = path_in(cfg, "picard.csv");
  write_text(csv_path, csv.str());
  r.files.push_back(csv_path);
  if (converged == 0) {
    r.exit_code = kExitCheckFailure;
    r.message = "contraction failed for every t0; use smaller amplitudes or smaller t0";
  } else if (prev_mean >= 0.0) {
    add(r, "ratio_increases_with_t0", increasing, prev_mean, 1.0, "mean ratio non-decreasing in t0");
  }
  finish(r, cfg);
  return r;
}

ExperimentResult run_command(const std::string& name, const RunConfig& cfg) {
  if (name == "linear-verify") return cmd_linear_verify(cfg);
  if (name == "simulate") return cmd_simulate(cfg);
  if (name == "audit") return cmd_audit(cfg);
  if (name == "decay") return cmd_decay(cfg);
  if (name == "picard") return cmd_picard(cfg);
  throw ConfigError("unknown command '" + name + "'");
}

}  // namespace zkb::harness
