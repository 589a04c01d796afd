#pragma once

// Run configuration. The text format is INI style:
//
//   # comment
//   [grid]
//   Nx = 32
//
// Every key belongs to a section; unknown sections or keys, duplicate keys,
// malformed values and out-of-range values raise ConfigError naming the key
// as `section.key`. Lists are comma separated.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hydrostat/hstokes.hpp"
#include "hydrostat/momentum.hpp"
#include "hydrostat/picard.hpp"
#include "hydrostat/viscosity.hpp"

namespace hydrostat {

struct RunConfig {
  struct GridSection {
    double L = 1.0;
    int Nx = 32;
    int Ny = 32;
  } grid;

  struct TimeSection {
    double T = 0.1;
    /// Unset: derived from cfl and the initial velocity.
    std::optional<double> dt;
    double cfl = 0.5;
  } time;

  struct ParamsSection {
    double lambda = 1e-3;
    double delta = 0.0;
    int mollify_sweeps = 3;
  } params;

  struct LawSection {
    std::string kind = "constant";
    double c0 = 1.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double floor = 0.5;
    std::vector<double> table;
    double table_rho_max = 2.0;
  } law;

  struct InitialSection {
    /// Preset id or path of an HPE1 snapshot holding a field named rho / u.
    std::string density = "uniform";
    std::string velocity = "zero";
    /// Amplitude of seeded uniform noise added to the density.
    double noise = 0.0;
  } initial;

  struct ForcingSection {
    /// Preset id or path of an HPE1 snapshot holding a field named f.
    std::string preset = "zero";
    std::string time = "constant";
    double period = 1.0;
  } forcing;

  struct OutputSection {
    std::string dir = "out";
    /// Snapshot every `cadence` steps; 0 writes the final state only.
    int cadence = 0;
  } output;

  struct SolverSection {
    double tol = 1e-8;
    int max_iters = 20;
    std::string linear = "direct";
    std::string face_average = "arithmetic";
    double vacuum_eps = 1e-10;
    bool warm_start = false;
  } solver;

  struct MonitorSection {
    double threshold = 1e6;
  } monitor;

  struct SweepSection {
    std::vector<double> deltas{0.1};
    std::vector<double> lambdas{1e-2, 5e-3, 2.5e-3};
  } sweep;

  struct MmsSection {
    std::string case_name = "constant-mu";
    std::vector<int> levels{16, 32, 64};
  } mms;

  struct TransportSection {
    /// none, uniform, swirl or a velocity preset id.
    std::string velocity = "none";
    double speed = 1.0;
  } transport;

  ViscosityLaw make_law() const;
  StokesOptions stokes_options() const;
  Forcing::Profile forcing_profile() const;
  /// PicardConfig with the given time step.
  PicardConfig picard_config(double dt) const;
};

/// Parses and validates configuration text.
RunConfig parse_config(std::string_view text);
/// Reads and parses a file; IoError when it cannot be read.
RunConfig load_config(const std::string& path);

}  // namespace hydrostat
