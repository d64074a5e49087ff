#include <gtest/gtest.h>

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "zkb/error.hpp"
#include "zkb/functionals.hpp"
#include "zkb/harness/calibration.hpp"
#include "zkb/harness/experiments.hpp"
#include "zkb/harness/initial_data.hpp"
#include "zkb/harness/io.hpp"
#include "zkb/harness/run_config.hpp"

namespace zkb::harness {
namespace {

namespace fs = std::filesystem;
using test::kPi;

class TempDir : public ::testing::Test {
 protected:
  fs::path dir;
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() /
          ("zkb_unit_" + std::to_string(::getpid()) + "_" + info->test_suite_name() + "_" + info->name());
    fs::create_directories(dir);
  }
  void TearDown() override {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }
};

// ---------------------------------------------------------------- config

TEST(RunConfig, ParsesKeysCommentsAndBlankLines) {
  const RunConfig c = parse_config(
      "# comment\n"
      "nx = 128\n"
      "\n"
      "ny=32   # trailing comment\n"
      "delta = 0.25\n"
      "scheme = picard\n"
      "flux_h = 0.5\n"
      "init = random_band\n"
      "init_seed = 42\n"
      "t_end = 1.5\n"
      "diagnostics = full\n"
      "picard_t0 = 0.01, 0.02\n"
      "identities = mass_3_3\n"
      "tolerance_profile = strict\n");
  EXPECT_EQ(c.nx, 128);
  EXPECT_EQ(c.ny, 32);
  EXPECT_DOUBLE_EQ(c.delta, 0.25);
  EXPECT_EQ(c.stepper.scheme, Scheme::picard);
  EXPECT_TRUE(c.regularized);
  EXPECT_DOUBLE_EQ(c.flux_h, 0.5);
  EXPECT_EQ(c.init.kind, InitKind::random_band);
  EXPECT_EQ(c.init.seed, 42u);
  EXPECT_DOUBLE_EQ(c.t_end, 1.5);
  EXPECT_EQ(c.diagnostics, DiagnosticsLevel::full);
  EXPECT_EQ(c.picard_t0, (std::vector<double>{0.01, 0.02}));
  EXPECT_EQ(c.identities, (std::vector<std::string>{"mass_3_3"}));
  EXPECT_EQ(c.tolerance_profile, ToleranceProfile::strict);
}

TEST(RunConfig, DefaultsAreTheDeskScaleScenario) {
  const RunConfig c;
  EXPECT_DOUBLE_EQ(c.L, kPi);
  EXPECT_DOUBLE_EQ(c.X, 16 * kPi);
  EXPECT_EQ(c.nx, 256);
  EXPECT_EQ(c.ny, 64);
  EXPECT_DOUBLE_EQ(c.delta, 0.5);
  EXPECT_DOUBLE_EQ(c.stepper.dt, 1e-3);
  EXPECT_NO_THROW(c.validate());
}

TEST(RunConfig, RejectsBadInput) {
  EXPECT_THROW(parse_config("colour = blue\n"), ConfigError);
  EXPECT_THROW(parse_config("nx = twelve\n"), ConfigError);
  EXPECT_THROW(parse_config("dt = 1e-3x\n"), ConfigError);
  EXPECT_THROW(parse_config("just a line\n"), ConfigError);
  EXPECT_THROW(parse_config("scheme = rk4\n"), ConfigError);
  EXPECT_THROW(parse_config("init = square\n"), ConfigError);
  EXPECT_THROW(parse_config("dealias = maybe\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/zkb.cfg"), ConfigError);
}

TEST(RunConfig, ValidateChecksCrossFieldConstraints) {
  EXPECT_THROW(parse_config("nx = 15\n").validate(), ConfigError);
  EXPECT_THROW(parse_config("init_l = 65\n").validate(), ConfigError);
  EXPECT_THROW(parse_config("t_end = 0\n").validate(), ConfigError);
  EXPECT_THROW(parse_config("dt = -1\n").validate(), ConfigError);
  EXPECT_THROW(parse_config("flux_h = 2\n").validate(), ConfigError);
  EXPECT_THROW(parse_config("picard_t0 = 0.1, -0.1\n").validate(), ConfigError);
}

TEST(RunConfig, TextDumpRoundTrips) {
  RunConfig c = parse_config("nx = 64\nny = 16\ninit = gaussian_bump\ninit_x0 = 0.1\nflux_h = 0.3\nL = 2.5\n");
  const RunConfig back = parse_config(c.to_text());
  EXPECT_EQ(back.to_text(), c.to_text());
  EXPECT_DOUBLE_EQ(back.L, 2.5);
  EXPECT_DOUBLE_EQ(back.init.x0, 0.1);
}

// ---------------------------------------------------------------- initial data

class InitialData : public ::testing::Test {
 protected:
  DomainConfig d = plan_domain(kPi, 16 * kPi, 128, 32, 0.5);
};

TEST_F(InitialData, EveryGeneratorVanishesAtTheWalls) {
  for (auto kind : {InitKind::eigenmode, InitKind::traveling_mode, InitKind::gaussian_bump, InitKind::random_band}) {
    InitialDataSpec s;
    s.kind = kind;
    s.l = 2;
    s.j = 3;
    const SpectralField u = make_initial_spectrum(s, d);
    for (double x : {-10.0, 0.0, 3.0}) EXPECT_EQ(evaluate_at(u, x, 0.0, d), 0.0);
    EXPECT_LT(u.hermitian_defect(), 1e-15);
  }
}

TEST_F(InitialData, GeneratorsMatchTheirFormulas) {
  InitialDataSpec s;
  s.kind = InitKind::gaussian_bump;
  s.amplitude = 0.7;
  s.x0 = 1.5;
  s.sigma_x = 2.0;
  s.l = 3;
  const GridField g = make_initial_data(s, d);
  const GridField want = test::sample(d, [](double x, double y) {
    return 0.7 * std::exp(-(x - 1.5) * (x - 1.5) / 8.0) * std::sin(3 * y);
  });
  EXPECT_LT(test::max_abs_diff(g, want), 1e-15);

  s.kind = InitKind::traveling_mode;
  s.j = 4;
  const double xi = 4 * kPi / d.X();
  const GridField t = make_initial_data(s, d);
  EXPECT_LT(test::max_abs_diff(t, test::sample(d, [&](double x, double y) {
              return 0.7 * std::cos(xi * x) * std::sin(3 * y);
            })),
            1e-15);
}

TEST_F(InitialData, GaussianSeamGuard) {
  InitialDataSpec s;
  s.sigma_x = 20.0;
  EXPECT_THROW(make_initial_data(s, d), ConfigError);
}

TEST_F(InitialData, RandomBandIsSeededAndScaled) {
  InitialDataSpec s;
  s.kind = InitKind::random_band;
  s.seed = 5;
  s.jmax = 6;
  s.lmax = 4;
  s.amplitude = 0.3;
  const GridField a = make_initial_data(s, d), b = make_initial_data(s, d);
  EXPECT_EQ(test::max_abs_diff(a, b), 0.0);
  EXPECT_NEAR(a.max_abs(), 0.3, 1e-15);
  s.seed = 6;
  EXPECT_GT(test::max_abs_diff(a, make_initial_data(s, d)), 1e-3);
  const SpectralField u = make_initial_spectrum(s, d);
  for (int jx = 0; jx < d.nx(); ++jx) {
    for (int l = 1; l <= d.ny(); ++l) {
      if (std::abs(d.frequency_index(jx)) > 6 || l > 4) { EXPECT_LT(std::abs(u(jx, l)), 1e-15); }
    }
  }
}

TEST_F(InitialData, ZeroGenerator) {
  InitialDataSpec s;
  s.kind = InitKind::zero;
  EXPECT_EQ(make_initial_data(s, d).max_abs(), 0.0);
}

// ---------------------------------------------------------------- io

class Io : public TempDir {};

TEST_F(Io, SnapshotRoundTripIsBitExact) {
  const DomainConfig d = plan_domain(kPi, 4.0, 16, 6, 0.5);
  const GridField g = test::random_grid(d, 3);
  write_snapshot(path("a.zkbs"), g);
  const GridField back = read_snapshot(path("a.zkbs"));
  ASSERT_EQ(back.nx(), 16);
  ASSERT_EQ(back.ny(), 6);
  EXPECT_EQ(std::memcmp(back.values().data(), g.values().data(), g.size() * sizeof(double)), 0);
}

TEST_F(Io, SnapshotLayout) {
  GridField g(8, 4);
  g(0, 0) = 1.0;
  g(0, 1) = 2.0;
  g(1, 0) = -0.5;
  write_snapshot(path("b.zkbs"), g);
  const std::string bytes = slurp(path("b.zkbs"));
  ASSERT_EQ(bytes.size(), 16u + 8u * 32u);
  EXPECT_EQ(bytes.substr(0, 4), "ZKBS");
  auto u32 = [&](std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[off + static_cast<std::size_t>(i)]);
    return v;
  };
  auto f64 = [&](std::size_t off) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[off + static_cast<std::size_t>(i)]);
    double x;
    std::memcpy(&x, &v, 8);
    return x;
  };
  EXPECT_EQ(u32(4), 1u);
  EXPECT_EQ(u32(8), 8u);
  EXPECT_EQ(u32(12), 4u);
  // Row-major with x outer: (0,0), (0,1), ..., (1,0) at index ny.
  EXPECT_EQ(f64(16), 1.0);
  EXPECT_EQ(f64(24), 2.0);
  EXPECT_EQ(f64(16 + 8 * 4), -0.5);
}

TEST_F(Io, SnapshotRejectsCorruptFiles) {
  GridField g(8, 4);
  write_snapshot(path("c.zkbs"), g);
  std::string bytes = slurp(path("c.zkbs"));
  {
    std::ofstream f(path("bad_magic.zkbs"), std::ios::binary);
    std::string b = bytes;
    b[0] = 'X';
    f << b;
  }
  {
    std::ofstream f(path("short.zkbs"), std::ios::binary);
    f << bytes.substr(0, bytes.size() - 3);
  }
  {
    std::ofstream f(path("version.zkbs"), std::ios::binary);
    std::string b = bytes;
    b[4] = 9;
    f << b;
  }
  EXPECT_THROW(read_snapshot(path("bad_magic.zkbs")), InvalidInput);
  EXPECT_THROW(read_snapshot(path("short.zkbs")), InvalidInput);
  EXPECT_THROW(read_snapshot(path("version.zkbs")), InvalidInput);
}

TEST_F(Io, DiagnosticsCsvColumnsAndDissipation) {
  const DomainConfig d = plan_domain(kPi, 8 * kPi, 32, 8, 0.5);
  InitialDataSpec s;
  StepperConfig c;
  c.dt = 0.01;
  const Trajectory tr = simulate(make_initial_data(s, d), 0.2, c, RegularizedFlux::unregularized(), d);
  const std::string csv = diagnostics_csv(tr, d.delta());
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,l2,h1,h2,diss_l2,diss_h1,nonlin_flux,step_iters");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  ASSERT_EQ(lines.size(), tr.diagnostics.size());
  const auto rows = diagnostics_table(tr, d.delta());
  // diss_l2 is 2δ∫|Du|^2 by the trapezoid rule; the mass balance closes to second order.
  const double m0 = tr.diagnostics.front().mass;
  const auto& last = rows.back();
  EXPECT_NEAR(last.l2 * last.l2 + last.diss_l2, m0, 1e-4 * m0);
  EXPECT_EQ(rows.front().diss_l2, 0.0);
  write_diagnostics_csv(path("d.csv"), tr, d.delta());
  EXPECT_EQ(slurp(path("d.csv")), csv);
}

// ---------------------------------------------------------------- calibration

TEST(Calibration, FrozenConstantsLoadAndArePositive) {
  const CalibrationConstants c = load_constants(default_constants_path());
  EXPECT_GT(c.c_square, 0.0);
  EXPECT_GT(c.c1, 0.0);
  EXPECT_GT(c.c2, 0.0);
  EXPECT_GT(c.h2_smoothing_bound, 0.0);
}

TEST(Calibration, RemeasuredConstantsMatchTheFrozenFile) {
  const CalibrationConstants frozen = load_constants(default_constants_path());
  const CalibrationConstants now = measure_constants(calibration_domain());
  EXPECT_NEAR(now.c_square, frozen.c_square, 1e-9 * frozen.c_square);
  EXPECT_NEAR(now.c1, frozen.c1, 1e-9 * frozen.c1);
  EXPECT_NEAR(now.c2, frozen.c2, 1e-9 * frozen.c2);
  EXPECT_NEAR(now.h2_smoothing_bound, frozen.h2_smoothing_bound, 1e-9 * frozen.h2_smoothing_bound);
}

TEST(Calibration, InterpolationInequalityHoldsOnTheCorpus) {
  const CalibrationConstants c = load_constants(default_constants_path());
  const DomainConfig d = calibration_domain();
  for (const auto& spec : calibration_corpus()) {
    SpectralField u = make_initial_spectrum(spec, d);
    apply_dealias(u, d);
    const CalibrationSample s = calibration_sample(u, d);
    // Same slack as the regression check of the frozen file.
    EXPECT_LE(s.c_square, c.c_square * (1 + 1e-9));
    EXPECT_LE(s.c1, c.c1 * (1 + 1e-9));
    EXPECT_LE(s.c2, c.c2 * (1 + 1e-9));
  }
}

TEST(Calibration, SmoothingProbeIsRoughAndBecomesFinite) {
  const DomainConfig d = calibration_domain();
  const SpectralField u0 = make_initial_spectrum(smoothing_probe(), d);
  EXPECT_GT(norm(u0, NormSpec::seminorm_k(2), d), 10.0 * norm(u0, NormSpec::seminorm_k(1), d));
  const double h2 = smoothing_h2(d);
  EXPECT_TRUE(std::isfinite(h2));
  EXPECT_LE(h2, load_constants(default_constants_path()).h2_smoothing_bound * (1 + 1e-9));
  EXPECT_LT(h2, norm(u0, NormSpec::full_hs(2.0), d));
}

class CalibrationFile : public TempDir {};

TEST_F(CalibrationFile, RejectsMalformedFiles) {
  {
    std::ofstream f(path("a.txt"));
    f << "c_square = 1\nc1 = 1\nc2 = 1\n";
  }
  EXPECT_THROW(load_constants(path("a.txt")), ConfigError);
  {
    std::ofstream f(path("b.txt"));
    f << "c_square = 1\nc1 = 1\nc2 = 1\nh2_smoothing_bound = 1\nc3 = 2\n";
  }
  EXPECT_THROW(load_constants(path("b.txt")), ConfigError);
  CalibrationConstants c{1.5, 2.5, 3.5, 4.5};
  {
    std::ofstream f(path("c.txt"));
    f << constants_text(c);
  }
  const CalibrationConstants back = load_constants(path("c.txt"));
  EXPECT_EQ(back.c_square, 1.5);
  EXPECT_EQ(back.h2_smoothing_bound, 4.5);
}

// ---------------------------------------------------------------- experiments

class Experiments : public TempDir {
 protected:
  RunConfig small() const {
    RunConfig c = parse_config("nx = 64\nny = 16\nX = 25.132741228718345\nt_end = 0.1\nsnapshot_stride = 20\n");
    c.out_dir = dir.string();
    return c;
  }
};

TEST_F(Experiments, SimulateWritesTablesSnapshotsAndSummary) {
  const ExperimentResult r = cmd_simulate(small());
  EXPECT_EQ(r.exit_code, kExitPass) << r.message;
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(fs::exists(path("diagnostics.csv")));
  EXPECT_TRUE(fs::exists(path("simulate.json")));
  EXPECT_TRUE(fs::exists(path("snapshots/snap_000000.zkbs")));
  const GridField last = read_snapshot(path("snapshots/snap_000005.zkbs"));
  EXPECT_EQ(last.nx(), 64);
  const std::string json = slurp(path("simulate.json"));
  EXPECT_NE(json.find("\"flux_orthogonality\""), std::string::npos);
  EXPECT_NE(json.find("\"pass\": true"), std::string::npos);
}

TEST_F(Experiments, SimulateIsDeterministic) {
  RunConfig c = small();
  c.init.kind = InitKind::random_band;
  c.init.seed = 9;
  c.out_dir = path("one");
  cmd_simulate(c);
  c.out_dir = path("two");
  cmd_simulate(c);
  const std::string a = slurp(path("one/diagnostics.csv")), b = slurp(path("two/diagnostics.csv"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
}

TEST_F(Experiments, ZeroRunPasses) {
  RunConfig c = small();
  c.init.kind = InitKind::zero;
  EXPECT_EQ(cmd_simulate(c).exit_code, kExitPass);
  const ExperimentResult d = cmd_decay(c);
  EXPECT_EQ(d.exit_code, kExitPass);
  EXPECT_NE(d.message.find("zero initial data"), std::string::npos);
}

TEST_F(Experiments, PicardZeroDataConvergesInstantly) {
  RunConfig c = small();
  c.init.kind = InitKind::zero;
  const ExperimentResult r = cmd_picard(c);
  EXPECT_EQ(r.exit_code, kExitPass);
  std::istringstream csv(slurp(path("picard.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "t0,iterations,converged,first_ratio,max_ratio,mean_ratio,etd2_distance");
  int rows = 0;
  for (; std::getline(csv, line); ++rows) EXPECT_NE(line.find(",1,1,0,0,0,0"), std::string::npos) << line;
  EXPECT_EQ(rows, 3);
}

TEST_F(Experiments, PicardFailureAdvisesSmallerData) {
  RunConfig c = small();
  c.init.amplitude = 20.0;
  c.picard_t0 = {0.5};
  c.stepper.picard_max_iter = 3;
  const ExperimentResult r = cmd_picard(c);
  EXPECT_EQ(r.exit_code, kExitCheckFailure);
  EXPECT_NE(r.message.find("smaller"), std::string::npos);
}

TEST_F(Experiments, AuditReportsRefinementOrders) {
  RunConfig c = small();
  c.t_end = 0.2;
  c.stepper.dt = 2e-3;
  const ExperimentResult r = cmd_audit(c);
  EXPECT_EQ(r.exit_code, kExitPass) << (r.first_failure() ? r.first_failure()->name : r.message);
  EXPECT_TRUE(fs::exists(path("audit.csv")));
  EXPECT_TRUE(fs::exists(path("audit_reports.json")));
}

TEST_F(Experiments, EigenmodeDecayMatchesTheSlowestRate) {
  RunConfig c = small();
  c.init.kind = InitKind::eigenmode;
  c.t_end = 2.0;
  c.stepper.dt = 0.01;
  c.snapshot_stride = 5;
  const ExperimentResult r = cmd_decay(c);
  EXPECT_EQ(r.exit_code, kExitPass);
  bool seen = false;
  for (const auto& ch : r.checks) {
    if (ch.name == "eigenmode_slope") {
      seen = true;
      EXPECT_NEAR(ch.value, -0.5, 1e-6);
    }
  }
  EXPECT_TRUE(seen);
}

TEST_F(Experiments, StrictProfileIsTighter) {
  const Tolerances a = tolerances(ToleranceProfile::standard), b = tolerances(ToleranceProfile::strict);
  EXPECT_LT(b.semigroup_rel, a.semigroup_rel);
  EXPECT_LT(b.mass_abs, a.mass_abs);
  EXPECT_LT(b.flux_rel, a.flux_rel);
}

TEST_F(Experiments, UnknownCommandIsAConfigError) {
  EXPECT_THROW(run_command("frobnicate", small()), ConfigError);
}

// ---------------------------------------------------------------- command line

class Cli : public TempDir {
 protected:
  int run(const std::string& args) const {
    const std::string cmd = std::string("\"") + ZKB_CLI_PATH + "\" " + args + " > \"" + path("log.txt") + "\" 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }
  std::string small_config() const {
    const std::string p = path("small.cfg");
    std::ofstream f(p);
    f << "nx = 64\nny = 16\nX = 25.132741228718345\nsnapshot_stride = 0\n";
    return p;
  }
};

TEST_F(Cli, PassingRunExitsZero) {
  EXPECT_EQ(run("simulate --config " + small_config() + " --t-end 0.05 --out " + path("o")), 0) << slurp(path("log.txt"));
  EXPECT_TRUE(fs::exists(path("o/diagnostics.csv")));
  EXPECT_EQ(run("linear-verify --config " + small_config() + " --out " + path("lv")), 0) << slurp(path("log.txt"));
}

TEST_F(Cli, FlagsOverrideTheConfigFile) {
  EXPECT_EQ(run("simulate --config " + small_config() + " --t-end 0.02 --dt 0.01 --scheme picard --h 0.5 --out " +
                path("o")),
            0)
      << slurp(path("log.txt"));
  const std::string csv = slurp(path("o/diagnostics.csv"));
  std::istringstream in(csv);
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  EXPECT_EQ(lines, 1 + 3);
  const std::string json = slurp(path("o/simulate.json"));
  EXPECT_NE(json.find("picard"), std::string::npos);
}

TEST_F(Cli, ConfigErrorsExitThree) {
  EXPECT_EQ(run("simulate --dt -1 --out " + path("o")), 3);
  EXPECT_EQ(run("simulate --config /nonexistent.cfg --out " + path("o")), 3);
  EXPECT_EQ(run("simulate --tolerance-profile lax --out " + path("o")), 3);
  EXPECT_EQ(run("simulate --bogus --out " + path("o")), 3);
  EXPECT_EQ(run(""), 3);
}

TEST_F(Cli, BlowupExitsTwo) {
  const std::string p = path("blow.cfg");
  {
    std::ofstream f(p);
    f << "nx = 64\nny = 16\nX = 25.132741228718345\ninit_amplitude = 200\ndt = 0.5\nt_end = 20\n";
  }
  EXPECT_EQ(run("simulate --config " + p + " --out " + path("o")), 2) << slurp(path("log.txt"));
}

TEST_F(Cli, CheckFailureExitsOne) {
  const std::string p = path("fail.cfg");
  {
    std::ofstream f(p);
    f << "nx = 64\nny = 16\nX = 25.132741228718345\ninit_amplitude = 20\npicard_t0 = 0.5\npicard_max_iter = 3\n";
  }
  EXPECT_EQ(run("picard --config " + p + " --out " + path("o")), 1) << slurp(path("log.txt"));
}

}  // namespace
}  // namespace zkb::harness
