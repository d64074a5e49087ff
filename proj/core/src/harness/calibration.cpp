#include "zkb/harness/calibration.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "zkb/error.hpp"
#include "zkb/functionals.hpp"
#include "zkb/harness/initial_data.hpp"
#include "zkb/nonlinear.hpp"

namespace zkb::harness {

std::string default_constants_path() { return ZKB_DEFAULT_CONSTANTS; }

CalibrationConstants load_constants(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open calibration constants '" + path + "'");
  CalibrationConstants c;
  std::string line;
  while (std::getline(f, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (eq == std::string::npos) throw ConfigError("calibration file: expected key = value in '" + line + "'");
    std::string key = line.substr(0, eq);
    key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
    double v = 0.0;
    try {
      v = std::stod(line.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("calibration file: bad number for '" + key + "'");
    }
    if (key == "c_square") {
      c.c_square = v;
    } else if (key == "c1") {
      c.c1 = v;
    } else if (key == "c2") {
      c.c2 = v;
    } else if (key == "h2_smoothing_bound") {
      c.h2_smoothing_bound = v;
    } else {
      throw ConfigError("calibration file: unknown key '" + key + "'");
    }
  }
  if (!(c.c_square > 0.0 && c.c1 > 0.0 && c.c2 > 0.0 && c.h2_smoothing_bound > 0.0)) {
    throw ConfigError("calibration file '" + path + "' must set positive c_square, c1, c2, h2_smoothing_bound");
  }
  return c;
}

std::string constants_text(const CalibrationConstants& c) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "# Measured by zkb_calibrate on the fixed corpus; do not edit by hand.\n";
  os << "c_square = " << c.c_square << "\n";
  os << "c1 = " << c.c1 << "\n";
  os << "c2 = " << c.c2 << "\n";
  os << "h2_smoothing_bound = " << c.h2_smoothing_bound << "\n";
  return os.str();
}

DomainConfig calibration_domain() { return plan_domain(M_PI, 16.0 * M_PI, 256, 64, 0.5); }

std::vector<InitialDataSpec> calibration_corpus() {
  std::vector<InitialDataSpec> out;
  for (double sigma : {1.0, 2.0, 4.0}) {
    for (int l : {1, 2, 3}) {
      for (double a : {0.1, 1.0}) {
        InitialDataSpec s;
        s.kind = InitKind::gaussian_bump;
        s.sigma_x = sigma;
        s.l = l;
        s.amplitude = a;
        out.push_back(s);
      }
    }
  }
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    for (double a : {0.1, 1.0}) {
      InitialDataSpec s;
      s.kind = InitKind::random_band;
      s.seed = seed;
      s.jmax = 8;
      s.lmax = 6;
      s.amplitude = a;
      out.push_back(s);
    }
  }
  return out;
}

InitialDataSpec smoothing_probe() {
  InitialDataSpec s;
  s.kind = InitKind::random_band;
  s.seed = 2024;
  s.jmax = 80;
  s.lmax = 40;
  s.amplitude = 0.5;
  return s;
}

double smoothing_h2(const DomainConfig& d) {
  StepperConfig cfg;
  cfg.dt = 1e-3;
  const auto u0 = make_initial_spectrum(smoothing_probe(), d);
  const Trajectory traj = simulate(u0, kSmoothingTime, cfg, RegularizedFlux::unregularized(), d);
  if (traj.blowup_time) throw NumericalBlowup(*traj.blowup_time, traj.blowup_message);
  return traj.diagnostics.back().h2();
}

CalibrationConstants measure_constants(const DomainConfig& d) {
  CalibrationConstants c;
  for (const auto& spec : calibration_corpus()) {
    SpectralField u = make_initial_spectrum(spec, d);
    apply_dealias(u, d);
    const auto s = calibration_sample(u, d);
    c.c_square = std::max(c.c_square, s.c_square);
    c.c1 = std::max(c.c1, s.c1);
    c.c2 = std::max(c.c2, s.c2);
  }
  c.h2_smoothing_bound = smoothing_h2(d);
  return c;
}

}  // namespace zkb::harness
