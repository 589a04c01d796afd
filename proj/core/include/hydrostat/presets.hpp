#pragma once

// Named initial data and forcing shapes. Functions of x are written with the
// wavenumber 2 pi / L so every preset is periodic for any domain length.
//
//   uniform           rho0 = 1, u0 = 0, f = 0
//   zero              u0 = 0, f = 0
//   stratified        rho0 = 1 + cos(pi y)/2
//   shear             u0 = sin(kx) sin(2 pi y)
//   vacuum-band       rho0 = max(0, sin(kx))^2
//   mixed             rho0 = 1 + cos(pi y)/2 + 0.3 sin(kx + 0.5),
//                     u0 = sin(kx) sin(2 pi y) + 0.5 cos(2kx + 1) sin(4 pi y)
//                          + 0.3 cos(3kx + 2) sin(2 pi y)
//   mms-steady        rho0 = 1, u0 = sin(kx) sin(2 pi y),
//                     f = mu_ref (k^2 + 4 pi^2) sin(kx) sin(2 pi y) - k sin(kx)
//   gradient-forcing  f = -dq/dx with q = cos(kx)

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hydrostat/grid_field.hpp"

namespace hydrostat {

enum class PresetComponent { density, velocity, forcing };

struct PresetData {
  std::optional<FieldFunction> density;
  std::optional<FieldFunction> velocity;
  std::optional<FieldFunction> forcing;
};

/// Throws ConfigError on an unknown id. mu_ref is the viscosity at rho = 1,
/// used by mms-steady so that (u0, P = cos(kx)) is a steady state.
PresetData preset_catalog(std::string_view id, double length = 1.0, double mu_ref = 1.0);

std::vector<std::string> preset_ids();
bool is_preset(std::string_view id);
bool preset_provides(std::string_view id, PresetComponent component);

}  // namespace hydrostat
