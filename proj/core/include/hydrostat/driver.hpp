#pragma once

// Run orchestration behind the hydrostat CLI. Every run_* function writes its
// outputs below the output directory and returns a process exit code.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "hydrostat/config.hpp"
#include "hydrostat/grid_field.hpp"
#include "hydrostat/momentum.hpp"
#include "hydrostat/viscosity.hpp"

namespace hydrostat {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitNotConverged = 3,
  kExitBlowup = 4,
};

struct RunOptions {
  /// Overrides output.dir.
  std::optional<std::string> out_dir;
  std::uint64_t seed = 0;
  /// Progress and error messages; nullptr silences them.
  std::ostream* log = nullptr;
};

struct InitialData {
  Grid grid;
  ViscosityLaw law = ViscosityLaw::constant(1.0, 1.0);
  /// Raw density, before any delta floor or mollification.
  ScalarField rho0;
  ScalarField u0;
  Forcing forcing;
};

/// Resolves presets and snapshot paths; adds seeded noise to the density.
/// Throws ConfigError when a source cannot be used on the configured grid.
InitialData build_initial_data(const RunConfig& cfg, std::uint64_t seed);

/// time.dt when set, else cfl / (U/hx + W/hy + 2 lambda/hx^2) with
/// U = max(1, max|u0|) and W = max(1, max|w0|).
double default_time_step(const RunConfig& cfg, const ScalarField& u0, double lambda);

int run_solve(const RunConfig& cfg, const RunOptions& opts);
int run_stokes(const RunConfig& cfg, const RunOptions& opts);
int run_transport(const RunConfig& cfg, const RunOptions& opts);
int run_picard_diagnose(const RunConfig& cfg, const RunOptions& opts);
int run_sweep(const RunConfig& cfg, const RunOptions& opts);
int run_mms(const RunConfig& cfg, const RunOptions& opts);

/// Dispatches on the subcommand name and maps exceptions to exit codes:
/// ConfigError and PreconditionError give 2, SolverError 3, anything else 1.
int run_command(const std::string& command, const RunConfig& cfg, const RunOptions& opts);

/// Loads the config file and calls run_command; a config that cannot be read
/// or parsed gives 2.
int run_command_file(const std::string& command, const std::string& config_path,
                     const RunOptions& opts);

}  // namespace hydrostat
