#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "hydrostat/config.hpp"
#include "hydrostat/csv.hpp"
#include "hydrostat/driver.hpp"
#include "hydrostat/errors.hpp"
#include "hydrostat/hstokes.hpp"
#include "hydrostat/presets.hpp"
#include "hydrostat/snapshot.hpp"
#include "support.hpp"

using namespace hydrostat;
using hydrostat::test::kPi;
namespace fs = std::filesystem;

namespace {

/// Fresh directory under the system temp path, removed on destruction.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("hydrostat_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& path) {
  const std::string s = slurp(path);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kSmallSolve = R"(
[grid]
Nx = 16
Ny = 16
[time]
T = 0.02
dt = 5e-3
[params]
lambda = 1e-3
delta = 0.2
[law]
kind = affine
c0 = 0.75
c1 = 0.25
floor = 0.5
[initial]
density = mixed
velocity = mixed
)";

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const RunConfig c = parse_config("[grid]\nNx = 16\nNy = 24\n[initial]\ndensity = stratified\nvelocity = shear\n");
  CHECK(c.grid.Nx == 16);
  CHECK(c.grid.Ny == 24);
  CHECK(c.grid.L == 1.0);
  CHECK(c.initial.density == "stratified");
  CHECK(c.initial.velocity == "shear");
  CHECK_FALSE(c.time.dt.has_value());
  CHECK(c.solver.tol == 1e-8);
  CHECK(c.solver.max_iters == 20);
  CHECK(c.monitor.threshold == 1e6);
  CHECK(c.params.lambda == 1e-3);
  CHECK(c.law.kind == "constant");
  CHECK(c.mms.case_name == "constant-mu");
  CHECK(c.sweep.lambdas.size() == 3u);
}

TEST_CASE("config values and lists") {
  const RunConfig c = parse_config(
      "# comment\n[time]\nT = 0.5\ndt = 1e-3\n[sweep]\ndeltas = 0.1, 0.05 ,0.025\n"
      "[mms]\nlevels = 8,16,32\ncase = variable-mu\n[solver]\nwarm_start = true\nlinear = iterative\n");
  CHECK(c.time.T == 0.5);
  REQUIRE(c.time.dt.has_value());
  CHECK(*c.time.dt == 1e-3);
  REQUIRE(c.sweep.deltas.size() == 3u);
  CHECK(c.sweep.deltas[1] == 0.05);
  CHECK(c.mms.levels.back() == 32);
  CHECK(c.solver.warm_start);
  CHECK(c.stokes_options().linear_solver == LinearSolverKind::iterative);
  CHECK(c.make_law()(1.0) == 1.0);
}

TEST_CASE("config errors name the offending key") {
  CHECK(config_error("[params]\nlambda = -1\n").find("params.lambda") != std::string::npos);
  CHECK(config_error("[params]\nlamda = 0.1\n").find("params.lamda") != std::string::npos);
  CHECK(config_error("[grid]\nNx = abc\n").find("grid.Nx") != std::string::npos);
  CHECK(config_error("[grid]\nNx = 7\n").find("grid.Nx") != std::string::npos);
  CHECK(config_error("[gird]\nNx = 16\n").find("gird") != std::string::npos);
  CHECK(config_error("Nx = 16\n").find("Nx") != std::string::npos);
  CHECK(config_error("[initial]\ndensity = nosuchpreset\n").find("initial.density") != std::string::npos);
  CHECK(config_error("[law]\nkind = cubic\n").find("law.kind") != std::string::npos);
  CHECK(config_error("[mms]\nlevels = 16, 24, 48\n").find("mms.levels") != std::string::npos);
  CHECK_FALSE(config_error("[grid]\nNx = 16\nNx = 32\n").empty());
  CHECK_THROWS_AS(load_config("/nonexistent/path.ini"), IoError);
}

TEST_CASE("snapshot round trip is bit exact") {
  TempDir tmp("snap");
  const Grid g = make_grid(2.0, 16, 12);
  Snapshot s(g, 0.125);
  s.add("rho", test::random_field(g, 1));
  s.add("u", test::random_field(g, 2, BoundaryY::dirichlet_zero));
  s.add("P", sample_profile(g, [](double x) { return std::cos(kPi * x) + 1e-300; }));
  write_snapshot(tmp.file("a.hpe"), s);
  const Snapshot r = read_snapshot(tmp.file("a.hpe"));
  CHECK(r == s);
  CHECK(r.field("u").bc() == BoundaryY::dirichlet_zero);
  CHECK(r.grid() == g);
  CHECK(r.t == 0.125);
  CHECK_THROWS_AS(r.field("P"), IoError);
  CHECK_THROWS_AS(r.field("missing"), IoError);
  const std::string bytes = slurp(tmp.file("a.hpe"));
  CHECK(bytes.substr(0, 4) == "HPE1");
  CHECK(bytes.size() == 4 + 3 * 4 + 2 * 8 + 4 + 3 * 17 + 8 * (2 * 16 * 13 + 16));
}

TEST_CASE("snapshot read errors") {
  TempDir tmp("snaperr");
  const Grid g = make_grid(1.0, 8, 8);
  Snapshot s(g, 0.0);
  s.add("rho", ScalarField(g, BoundaryY::free, 1.0));
  write_snapshot(tmp.file("s.hpe"), s);
  std::string bytes = slurp(tmp.file("s.hpe"));

  std::ofstream(tmp.file("trunc.hpe"), std::ios::binary) << bytes.substr(0, bytes.size() - 5);
  try {
    read_snapshot(tmp.file("trunc.hpe"));
    FAIL("truncated file was accepted");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("length mismatch") != std::string::npos);
  }

  std::string v = bytes;
  const std::uint32_t version = 999;
  v[4] = static_cast<char>(version & 0xff);
  v[5] = static_cast<char>(version >> 8);
  v[6] = v[7] = 0;
  std::ofstream(tmp.file("v.hpe"), std::ios::binary) << v;
  try {
    read_snapshot(tmp.file("v.hpe"));
    FAIL("future version was accepted");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("999") != std::string::npos);
  }

  std::string m = bytes;
  m[0] = 'X';
  std::ofstream(tmp.file("m.hpe"), std::ios::binary) << m;
  CHECK_THROWS_AS(read_snapshot(tmp.file("m.hpe")), IoError);
  CHECK_THROWS_AS(read_snapshot(tmp.file("none.hpe")), IoError);
  std::ofstream(tmp.file("long.hpe"), std::ios::binary) << bytes << "xx";
  CHECK_THROWS_AS(read_snapshot(tmp.file("long.hpe")), IoError);
}

TEST_CASE("csv formatting and line counts") {
  TempDir tmp("csv");
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(std::nan("")) == "nan");
  CHECK(std::stod(format_real(kPi)) == kPi);

  emit_norm_csv(tmp.file("empty.csv"), {});
  CHECK(count_lines(tmp.file("empty.csv")) == 1u);
  CHECK(slurp(tmp.file("empty.csv")).rfind("t,l2_u,h1_u,", 0) == 0);

  const Grid g = make_grid(1.0, 8, 8);
  const ScalarField rho(g, BoundaryY::free, 1.0);
  const ScalarField u = test::random_smooth(g, 1, BoundaryY::dirichlet_zero);
  std::vector<NormSnapshot> snaps;
  PhiSeries series;
  for (int k = 0; k < 3; ++k) {
    snaps.push_back(make_snapshot(0.1 * k, rho, u, u, PressureProfile(g)));
    series.append(0.1 * k, 1.0 + k, 3.0 + k);
  }
  emit_norm_csv(tmp.file("three.csv"), snaps);
  CHECK(count_lines(tmp.file("three.csv")) == 4u);
  emit_norm_csv(tmp.file("phi.csv"), snaps, &series);
  const std::string phi = slurp(tmp.file("phi.csv"));
  CHECK(phi.substr(0, phi.find('\n')).find(",phi,j") != std::string::npos);
  emit_norm_csv(tmp.file("again.csv"), snaps, &series);
  CHECK(slurp(tmp.file("again.csv")) == phi);

  CsvWriter w(tmp.file("w.csv"), {"a", "b"});
  CHECK_THROWS_AS(w.row(std::vector<std::string>{"1"}), PreconditionError);
  CHECK_THROWS_AS(CsvWriter("/nonexistent/dir/x.csv", {"a"}), IoError);
}

TEST_CASE("preset catalog") {
  const Grid g = make_grid(1.0, 32, 32);
  for (const char* id : {"uniform", "stratified", "shear", "vacuum-band", "mms-steady", "gradient-forcing", "mixed"}) {
    CHECK(is_preset(id));
  }
  CHECK_THROWS_AS(preset_catalog("nope"), ConfigError);

  const PresetData shear = preset_catalog("shear");
  REQUIRE(shear.velocity.has_value());
  const ScalarField u = sample(g, *shear.velocity, BoundaryY::dirichlet_zero);
  CHECK(constraint_residual(u) <= 1e-12);

  const PresetData vac = preset_catalog("vacuum-band");
  const ScalarField rho = sample(g, *vac.density, BoundaryY::free);
  CHECK(rho.min() == 0.0);
  // C1: the one-sided x slopes on either side of every node agree to O(h).
  for (int i = 0; i < g.nx(); ++i) {
    const double left = (rho(i, 3) - rho(g.wrap(i - 1), 3)) / g.hx();
    const double right = (rho(g.wrap(i + 1), 3) - rho(i, 3)) / g.hx();
    CHECK(std::abs(right - left) <= 10.0 * 4 * kPi * kPi * g.hx());
  }

  const PresetData mms = preset_catalog("mms-steady");
  REQUIRE(mms.forcing.has_value());
  const ScalarField f = sample(g, *mms.forcing, BoundaryY::free);
  CHECK(test::max_abs_diff(f, mms_forcing(mms_constant_mu(), g)) <= 1e-10);

  const PresetData grad = preset_catalog("gradient-forcing");
  const ScalarField fg = sample(g, *grad.forcing, BoundaryY::free);
  CHECK(fg(g.nx() / 4, 5) == doctest::Approx(2 * kPi));
  CHECK(preset_provides("stratified", PresetComponent::density));
  CHECK_FALSE(preset_provides("stratified", PresetComponent::velocity));
}

TEST_CASE("initial data and default step") {
  RunConfig c = parse_config(kSmallSolve);
  c.initial.noise = 1e-3;
  const InitialData a = build_initial_data(c, 7);
  const InitialData b = build_initial_data(c, 7);
  const InitialData d = build_initial_data(c, 8);
  CHECK(test::max_abs_diff(a.rho0, b.rho0) == 0.0);
  CHECK(test::max_abs_diff(a.rho0, d.rho0) > 0.0);
  CHECK(test::max_abs_diff(a.rho0, d.rho0) <= 1e-3);
  CHECK(a.u0.bc() == BoundaryY::dirichlet_zero);

  RunConfig e = c;
  e.time.dt.reset();
  e.time.cfl = 0.5;
  const ScalarField zero(a.grid, BoundaryY::dirichlet_zero);
  const double dt = default_time_step(e, zero, 0.0);
  CHECK(dt == doctest::Approx(0.5 / (16.0 + 16.0)));
  CHECK(default_time_step(c, zero, 0.0) == 5e-3);
}

TEST_CASE("snapshot sources for initial data") {
  TempDir tmp("src");
  const Grid g = make_grid(1.0, 16, 16);
  Snapshot s(g, 0.0);
  s.add("rho", ScalarField(g, BoundaryY::free, 1.5));
  s.add("u", ScalarField(g, BoundaryY::dirichlet_zero));
  write_snapshot(tmp.file("init.hpe"), s);
  RunConfig c = parse_config(std::string(kSmallSolve) + "");
  c.initial.density = tmp.file("init.hpe");
  c.initial.velocity = tmp.file("init.hpe");
  const InitialData d = build_initial_data(c, 0);
  CHECK(d.rho0.min() == 1.5);
  c.grid.Nx = 32;
  CHECK_THROWS_AS(build_initial_data(c, 0), ConfigError);
}

TEST_CASE("driver exit codes") {
  TempDir tmp("driver");
  RunOptions opts;
  opts.out_dir = tmp.path.string();

  CHECK(run_command_file("solve", tmp.file("missing.ini"), opts) == kExitConfig);
  std::ofstream(tmp.file("bad.ini")) << "[params]\nlamda = 1\n";
  CHECK(run_command_file("solve", tmp.file("bad.ini"), opts) == kExitConfig);

  const RunConfig ok = parse_config(kSmallSolve);
  CHECK(run_command("bogus", ok, opts) == kExitConfig);
  CHECK(run_command("solve", ok, opts) == kExitOk);
  CHECK(fs::exists(tmp.path / "norms.csv"));
  CHECK(fs::exists(tmp.path / "picard_diagnostics.csv"));
  CHECK(count_lines(tmp.file("norms.csv")) == 6u);

  RunConfig tight = ok;
  tight.solver.max_iters = 2;
  tight.solver.tol = 1e-15;
  CHECK(run_command("solve", tight, opts) == kExitNotConverged);

  RunConfig low = ok;
  low.monitor.threshold = 1.5;
  opts.out_dir = (tmp.path / "blowup").string();
  CHECK(run_command("solve", low, opts) == kExitBlowup);
  CHECK(fs::exists(tmp.path / "blowup" / "blowup.csv"));
  CHECK(fs::exists(tmp.path / "blowup" / "norms.csv"));

  RunConfig stokes = ok;
  opts.out_dir = (tmp.path / "stokes").string();
  CHECK(run_command("stokes", stokes, opts) == kExitOk);
  CHECK(fs::exists(tmp.path / "stokes" / "stokes.hpe"));
  const Snapshot sol = read_snapshot((tmp.path / "stokes" / "stokes.hpe").string());
  CHECK(constraint_residual(sol.field("u")) <= 1e-9);

  RunConfig mms = ok;
  mms.mms.levels = {8, 16, 32};
  opts.out_dir = (tmp.path / "mms").string();
  CHECK(run_command("mms", mms, opts) == kExitOk);
  CHECK(count_lines((tmp.path / "mms" / "mms_levels.csv").string()) == 4u);

  RunConfig tr = ok;
  tr.transport.velocity = "swirl";
  opts.out_dir = (tmp.path / "transport").string();
  CHECK(run_command("transport", tr, opts) == kExitOk);
  CHECK(fs::exists(tmp.path / "transport" / "transport.csv"));
}
