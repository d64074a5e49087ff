#include "zkb/harness/run_config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "zkb/error.hpp"

namespace zkb::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
  }
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
  }
  return x;
}

int to_int32(const std::string& key, const std::string& v) {
  const long long x = to_int(key, v);
  if (x < -2147483647LL || x > 2147483647LL) throw ConfigError("config key '" + key + "': integer out of range");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

const char* init_name(InitKind k) {
  switch (k) {
    case InitKind::zero:
      return "zero";
    case InitKind::eigenmode:
      return "eigenmode";
    case InitKind::traveling_mode:
      return "traveling_mode";
    case InitKind::gaussian_bump:
      return "gaussian_bump";
    case InitKind::random_band:
      return "random_band";
  }
  return "zero";
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

const char* scheme_name(Scheme s) { return s == Scheme::etd2 ? "etd2" : "picard"; }
const char* profile_name(ToleranceProfile p) { return p == ToleranceProfile::strict ? "strict" : "default"; }

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "L") {
    L = to_double(key, v);
  } else if (key == "X") {
    X = to_double(key, v);
  } else if (key == "nx") {
    nx = to_int32(key, v);
  } else if (key == "ny") {
    ny = to_int32(key, v);
  } else if (key == "delta") {
    delta = to_double(key, v);
  } else if (key == "scheme") {
    if (v == "etd2") {
      stepper.scheme = Scheme::etd2;
    } else if (v == "picard") {
      stepper.scheme = Scheme::picard;
    } else {
      throw ConfigError("config key 'scheme': expected etd2 or picard, got '" + v + "'");
    }
  } else if (key == "dt") {
    stepper.dt = to_double(key, v);
  } else if (key == "picard_tol") {
    stepper.picard_tol = to_double(key, v);
  } else if (key == "picard_max_iter") {
    stepper.picard_max_iter = to_int32(key, v);
  } else if (key == "dealias") {
    stepper.dealias = to_bool(key, v);
  } else if (key == "flux_h") {
    if (v == "none") {
      regularized = false;
    } else {
      regularized = true;
      flux_h = to_double(key, v);
    }
  } else if (key == "init") {
    bool found = false;
    for (auto k : {InitKind::zero, InitKind::eigenmode, InitKind::traveling_mode, InitKind::gaussian_bump,
                   InitKind::random_band}) {
      if (v == init_name(k)) {
        init.kind = k;
        found = true;
      }
    }
    if (!found) throw ConfigError("config key 'init': unknown generator '" + v + "'");
  } else if (key == "init_l") {
    init.l = to_int32(key, v);
  } else if (key == "init_j") {
    init.j = to_int32(key, v);
  } else if (key == "init_x0") {
    init.x0 = to_double(key, v);
  } else if (key == "init_sigma_x") {
    init.sigma_x = to_double(key, v);
  } else if (key == "init_amplitude") {
    init.amplitude = to_double(key, v);
  } else if (key == "init_seed") {
    const long long s = to_int(key, v);
    if (s < 0) throw ConfigError("config key 'init_seed' must be non-negative");
    init.seed = static_cast<std::uint64_t>(s);
  } else if (key == "init_jmax") {
    init.jmax = to_int32(key, v);
  } else if (key == "init_lmax") {
    init.lmax = to_int32(key, v);
  } else if (key == "t_end") {
    t_end = to_double(key, v);
  } else if (key == "snapshot_stride") {
    snapshot_stride = to_int32(key, v);
  } else if (key == "diagnostics") {
    if (v == "basic") {
      diagnostics = DiagnosticsLevel::basic;
    } else if (v == "full") {
      diagnostics = DiagnosticsLevel::full;
    } else {
      throw ConfigError("config key 'diagnostics': expected basic or full, got '" + v + "'");
    }
  } else if (key == "out_dir") {
    if (v.empty()) throw ConfigError("config key 'out_dir' must not be empty");
    out_dir = v;
  } else if (key == "tolerance_profile") {
    if (v == "strict") {
      tolerance_profile = ToleranceProfile::strict;
    } else if (v == "default") {
      tolerance_profile = ToleranceProfile::standard;
    } else {
      throw ConfigError("config key 'tolerance_profile': expected strict or default, got '" + v + "'");
    }
  } else if (key == "picard_t0") {
    picard_t0.clear();
    for (const auto& item : split_list(v)) picard_t0.push_back(to_double(key, item));
  } else if (key == "identities") {
    identities = split_list(v);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void RunConfig::validate() const {
  (void)plan_domain(L, X, nx, ny, delta);
  stepper.validate();
  if (regularized) (void)RegularizedFlux::with_scale(flux_h);
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (snapshot_stride < 0) throw ConfigError("snapshot_stride must be non-negative");
  if (init.l < 1 || init.l > ny) throw ConfigError("init_l must lie in 1..ny");
  if (std::abs(init.j) >= nx / 2) throw ConfigError("|init_j| must be below nx/2");
  if (!(init.sigma_x > 0.0)) throw ConfigError("init_sigma_x must be positive");
  if (init.jmax < 0 || init.jmax >= nx / 2) throw ConfigError("init_jmax must lie in 0..nx/2-1");
  if (init.lmax < 1 || init.lmax > ny) throw ConfigError("init_lmax must lie in 1..ny");
  if (!std::isfinite(init.amplitude)) throw ConfigError("init_amplitude must be finite");
  for (double t0 : picard_t0) {
    if (!(t0 > 0.0)) throw ConfigError("picard_t0 entries must be positive");
  }
}

std::string RunConfig::to_text() const {
  std::map<std::string, std::string> kv;
  kv["L"] = fmt(L);
  kv["X"] = fmt(X);
  kv["nx"] = std::to_string(nx);
  kv["ny"] = std::to_string(ny);
  kv["delta"] = fmt(delta);
  kv["scheme"] = scheme_name(stepper.scheme);
  kv["dt"] = fmt(stepper.dt);
  kv["picard_tol"] = fmt(stepper.picard_tol);
  kv["picard_max_iter"] = std::to_string(stepper.picard_max_iter);
  kv["dealias"] = stepper.dealias ? "true" : "false";
  kv["flux_h"] = regularized ? fmt(flux_h) : "none";
  kv["init"] = init_name(init.kind);
  kv["init_l"] = std::to_string(init.l);
  kv["init_j"] = std::to_string(init.j);
  kv["init_x0"] = fmt(init.x0);
  kv["init_sigma_x"] = fmt(init.sigma_x);
  kv["init_amplitude"] = fmt(init.amplitude);
  kv["init_seed"] = std::to_string(init.seed);
  kv["init_jmax"] = std::to_string(init.jmax);
  kv["init_lmax"] = std::to_string(init.lmax);
  kv["t_end"] = fmt(t_end);
  kv["snapshot_stride"] = std::to_string(snapshot_stride);
  kv["diagnostics"] = diagnostics == DiagnosticsLevel::full ? "full" : "basic";
  kv["out_dir"] = out_dir;
  kv["tolerance_profile"] = profile_name(tolerance_profile);
  std::string t0, ids;
  for (std::size_t i = 0; i < picard_t0.size(); ++i) t0 += (i ? "," : "") + fmt(picard_t0[i]);
  for (std::size_t i = 0; i < identities.size(); ++i) ids += (i ? "," : "") + identities[i];
  kv["picard_t0"] = t0;
  kv["identities"] = ids;
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    base.set(key, line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace zkb::harness
