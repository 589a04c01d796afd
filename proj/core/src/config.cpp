#include "hydrostat/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hydrostat/errors.hpp"
#include "hydrostat/presets.hpp"

namespace hydrostat {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    bad(key, "expected a finite number, got '" + s + "'");
  }
  return v;
}

int to_int(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    bad(key, "expected an integer, got '" + s + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  bad(key, "expected true or false, got '" + s + "'");
}

template <typename T, typename Conv>
std::vector<T> to_list(const std::string& key, const std::string& raw, Conv conv) {
  std::vector<T> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(conv(key, item));
  if (out.empty()) bad(key, "expected a non-empty list");
  return out;
}

void one_of(const std::string& key, const std::string& v, std::initializer_list<const char*> opts) {
  std::string allowed;
  for (const char* o : opts) {
    if (v == o) return;
    allowed += allowed.empty() ? o : std::string(", ") + o;
  }
  bad(key, "unknown value '" + v + "' (expected one of: " + allowed + ")");
}

bool is_path(const std::string& s) {
  return s.find('/') != std::string::npos ||
         (s.size() > 4 && s.compare(s.size() - 4, 4, ".hpe") == 0);
}

void check_source(const std::string& key, const std::string& value, PresetComponent c) {
  if (is_path(value)) return;
  if (!preset_provides(value, c)) {
    if (!is_preset(value)) bad(key, "unknown preset '" + value + "'");
    bad(key, "preset '" + value + "' does not provide this field");
  }
}

void validate(const RunConfig& c) {
  if (!(c.grid.L > 0.0)) bad("grid.L", "must be positive");
  if (c.grid.Nx < 8 || c.grid.Nx % 2 != 0) bad("grid.Nx", "must be even and >= 8");
  if (c.grid.Ny < 8) bad("grid.Ny", "must be >= 8");
  if (!(c.time.T > 0.0)) bad("time.T", "must be positive");
  if (c.time.dt && !(*c.time.dt > 0.0)) bad("time.dt", "must be positive");
  if (!(c.time.cfl > 0.0 && c.time.cfl <= 1.0)) bad("time.cfl", "must lie in (0, 1]");
  if (!(c.params.lambda >= 0.0)) bad("params.lambda", "must be >= 0");
  if (!(c.params.delta >= 0.0)) bad("params.delta", "must be >= 0");
  if (c.params.mollify_sweeps < 0) bad("params.mollify_sweeps", "must be >= 0");
  one_of("law.kind", c.law.kind, {"constant", "affine", "quadratic", "table"});
  if (!(c.law.floor > 0.0)) bad("law.floor", "must be positive");
  if (c.law.kind == "table" && c.law.table.size() < 2) bad("law.table", "needs at least 2 samples");
  if (!(c.law.table_rho_max > 0.0)) bad("law.table_rho_max", "must be positive");
  try {
    (void)c.make_law();
  } catch (const PreconditionError& e) {
    bad("law", e.what());
  }
  check_source("initial.density", c.initial.density, PresetComponent::density);
  check_source("initial.velocity", c.initial.velocity, PresetComponent::velocity);
  if (!(c.initial.noise >= 0.0)) bad("initial.noise", "must be >= 0");
  check_source("forcing.preset", c.forcing.preset, PresetComponent::forcing);
  one_of("forcing.time", c.forcing.time, {"constant", "ramp", "sinusoid"});
  if (!(c.forcing.period > 0.0)) bad("forcing.period", "must be positive");
  if (c.output.dir.empty()) bad("output.dir", "must not be empty");
  if (c.output.cadence < 0) bad("output.cadence", "must be >= 0");
  if (!(c.solver.tol > 0.0)) bad("solver.tol", "must be positive");
  if (c.solver.max_iters < 2) bad("solver.max_iters", "must be >= 2");
  one_of("solver.linear", c.solver.linear, {"direct", "iterative"});
  one_of("solver.face_average", c.solver.face_average, {"arithmetic", "harmonic"});
  if (!(c.solver.vacuum_eps > 0.0)) bad("solver.vacuum_eps", "must be positive");
  if (!(c.monitor.threshold > 1.0)) bad("monitor.threshold", "must be > 1");
  for (const char* key : {"sweep.deltas", "sweep.lambdas"}) {
    const auto& v = std::string(key) == "sweep.deltas" ? c.sweep.deltas : c.sweep.lambdas;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] >= 0.0)) bad(key, "entries must be >= 0");
      if (i > 0 && v[i] > v[i - 1]) bad(key, "entries must be decreasing");
    }
  }
  if (c.sweep.deltas.size() != c.sweep.lambdas.size() && c.sweep.deltas.size() != 1 &&
      c.sweep.lambdas.size() != 1) {
    bad("sweep.lambdas", "length must match sweep.deltas or one of them must have one entry");
  }
  one_of("mms.case", c.mms.case_name, {"constant-mu", "variable-mu", "zero"});
  if (c.mms.levels.size() < 3) bad("mms.levels", "needs at least 3 levels");
  for (std::size_t i = 0; i < c.mms.levels.size(); ++i) {
    if (c.mms.levels[i] < 8 || c.mms.levels[i] % 2 != 0) bad("mms.levels", "entries must be even and >= 8");
    if (i > 0 && c.mms.levels[i] != 2 * c.mms.levels[i - 1]) bad("mms.levels", "each level must double the last");
  }
  if (c.transport.velocity != "none" && c.transport.velocity != "uniform" &&
      c.transport.velocity != "swirl") {
    check_source("transport.velocity", c.transport.velocity, PresetComponent::velocity);
  }
}

}  // namespace

ViscosityLaw RunConfig::make_law() const {
  if (law.kind == "constant") return ViscosityLaw::constant(law.c0, law.floor);
  if (law.kind == "affine") return ViscosityLaw::affine(law.c0, law.c1, law.floor);
  if (law.kind == "quadratic") return ViscosityLaw::quadratic(law.c0, law.c1, law.c2, law.floor);
  return ViscosityLaw::table(law.table, law.table_rho_max, law.floor);
}

StokesOptions RunConfig::stokes_options() const {
  StokesOptions o;
  o.face_average = solver.face_average == "harmonic" ? FaceAverage::harmonic : FaceAverage::arithmetic;
  o.linear_solver = solver.linear == "iterative" ? LinearSolverKind::iterative : LinearSolverKind::direct;
  return o;
}

Forcing::Profile RunConfig::forcing_profile() const {
  if (forcing.time == "ramp") return Forcing::Profile::ramp;
  if (forcing.time == "sinusoid") return Forcing::Profile::sinusoid;
  return Forcing::Profile::constant;
}

PicardConfig RunConfig::picard_config(double dt) const {
  PicardConfig p;
  p.T = time.T;
  p.dt = dt;
  p.tol = solver.tol;
  p.max_iters = solver.max_iters;
  p.lambda = params.lambda;
  p.delta = params.delta;
  p.law = make_law();
  p.momentum.stokes = stokes_options();
  p.vacuum_eps = solver.vacuum_eps;
  return p;
}

RunConfig parse_config(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    std::ostringstream os;
    os << "config line " << e.line() << ": " << e.message();
    throw ConfigError(os.str());
  }

  RunConfig c;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto num = [](double& d) -> Setter { return [&d](const auto& k, const auto& v) { d = to_double(k, v); }; };
  auto integer = [](int& i) -> Setter { return [&i](const auto& k, const auto& v) { i = to_int(k, v); }; };
  auto str = [](std::string& s) -> Setter { return [&s](const auto&, const auto& v) { s = trim(v); }; };
  const std::map<std::string, Setter> keys = {
      {"grid.L", num(c.grid.L)},
      {"grid.Nx", integer(c.grid.Nx)},
      {"grid.Ny", integer(c.grid.Ny)},
      {"time.T", num(c.time.T)},
      {"time.dt", [&c](const auto& k, const auto& v) { c.time.dt = to_double(k, v); }},
      {"time.cfl", num(c.time.cfl)},
      {"params.lambda", num(c.params.lambda)},
      {"params.delta", num(c.params.delta)},
      {"params.mollify_sweeps", integer(c.params.mollify_sweeps)},
      {"law.kind", str(c.law.kind)},
      {"law.c0", num(c.law.c0)},
      {"law.c1", num(c.law.c1)},
      {"law.c2", num(c.law.c2)},
      {"law.floor", num(c.law.floor)},
      {"law.table", [&c](const auto& k, const auto& v) { c.law.table = to_list<double>(k, v, to_double); }},
      {"law.table_rho_max", num(c.law.table_rho_max)},
      {"initial.density", str(c.initial.density)},
      {"initial.velocity", str(c.initial.velocity)},
      {"initial.noise", num(c.initial.noise)},
      {"forcing.preset", str(c.forcing.preset)},
      {"forcing.time", str(c.forcing.time)},
      {"forcing.period", num(c.forcing.period)},
      {"output.dir", str(c.output.dir)},
      {"output.cadence", integer(c.output.cadence)},
      {"solver.tol", num(c.solver.tol)},
      {"solver.max_iters", integer(c.solver.max_iters)},
      {"solver.linear", str(c.solver.linear)},
      {"solver.face_average", str(c.solver.face_average)},
      {"solver.vacuum_eps", num(c.solver.vacuum_eps)},
      {"solver.warm_start", [&c](const auto& k, const auto& v) { c.solver.warm_start = to_bool(k, v); }},
      {"monitor.threshold", num(c.monitor.threshold)},
      {"sweep.deltas", [&c](const auto& k, const auto& v) { c.sweep.deltas = to_list<double>(k, v, to_double); }},
      {"sweep.lambdas", [&c](const auto& k, const auto& v) { c.sweep.lambdas = to_list<double>(k, v, to_double); }},
      {"mms.case", str(c.mms.case_name)},
      {"mms.levels", [&c](const auto& k, const auto& v) { c.mms.levels = to_list<int>(k, v, to_int); }},
      {"transport.velocity", str(c.transport.velocity)},
      {"transport.speed", num(c.transport.speed)},
  };

  static const std::set<std::string> sections = {"grid",   "time",   "params", "law",
                                                 "initial", "forcing", "output", "solver",
                                                 "monitor", "sweep",  "mms",    "transport"};
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) bad(section, "key outside a section");
    if (!sections.contains(section)) bad(section, "unknown section");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = keys.find(full);
      if (it == keys.end()) bad(full, "unknown key");
      it->second(full, value.data());
    }
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace hydrostat
