// zkb: command line front end for the simulator and its verification experiments.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "zkb/error.hpp"
#include "zkb/harness/experiments.hpp"
#include "zkb/harness/run_config.hpp"

namespace {

struct Overrides {
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<std::string> dt;
  std::optional<std::string> t_end;
  std::optional<std::string> scheme;
  std::optional<std::string> h;
  std::optional<std::string> seed;
  std::optional<std::string> profile;
};

zkb::harness::RunConfig resolve(const Overrides& o) {
  zkb::harness::RunConfig cfg = o.config ? zkb::harness::load_config(*o.config) : zkb::harness::RunConfig{};
  if (o.out) cfg.set("out_dir", *o.out);
  if (o.dt) cfg.set("dt", *o.dt);
  if (o.t_end) cfg.set("t_end", *o.t_end);
  if (o.scheme) cfg.set("scheme", *o.scheme);
  if (o.h) cfg.set("flux_h", *o.h);
  if (o.seed) cfg.set("init_seed", *o.seed);
  if (o.profile) cfg.set("tolerance_profile", *o.profile);
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral Zakharov-Kuznetsov-Burgers simulator and verification harness"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help and exit");
  Overrides o;
  const char* commands[][2] = {
      {"linear-verify", "closed-form, semigroup and Duhamel-oracle checks of the linear propagator"},
      {"simulate", "run the nonlinear flow and write diagnostics and snapshots"},
      {"audit", "energy-identity residuals and their dt-refinement order"},
      {"decay", "decay-rate fits of the H^s norms"},
      {"picard", "Picard contraction study over a grid of t0"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c[0], c[1]);
    sub->set_help_flag("--help", "print this help and exit");
    sub->add_option("--config", o.config, "flat key=value config file");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--dt", o.dt, "time step");
    sub->add_option("--t-end", o.t_end, "final time");
    sub->add_option("--scheme", o.scheme, "etd2 or picard");
    sub->add_option("--h", o.h, "flux regularization scale in (0,1], or none");
    sub->add_option("--seed", o.seed, "seed of the random_band generator");
    sub->add_option("--tolerance-profile", o.profile, "strict or default");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : zkb::harness::kExitConfigError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const auto cfg = resolve(o);
    const auto result = zkb::harness::run_command(name, cfg);
    for (const auto& c : result.checks) {
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << c.value << " limit=" << c.limit;
      if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
      std::cout << "\n";
    }
    if (!result.message.empty()) std::cout << result.message << "\n";
    if (result.exit_code != zkb::harness::kExitPass) {
      const auto* f = result.first_failure();
      std::cerr << name << ": " << (f ? "first failing check: " + f->name : result.message) << "\n";
    }
    return result.exit_code;
  } catch (const zkb::ConfigError& e) {
    std::cerr << name << ": configuration error: " << e.what() << "\n";
    return zkb::harness::kExitConfigError;
  } catch (const zkb::NumericalBlowup& e) {
    std::cerr << name << ": numerical blowup at t = " << e.time() << ": " << e.what() << "\n";
    return zkb::harness::kExitBlowup;
  } catch (const zkb::Error& e) {
    std::cerr << name << ": " << e.what() << "\n";
    return zkb::harness::kExitCheckFailure;
  }
}
