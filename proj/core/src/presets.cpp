#include "hydrostat/presets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hydrostat/errors.hpp"

namespace hydrostat {

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<std::string>& ids() {
  static const std::vector<std::string> v = {"uniform", "zero",  "stratified",   "shear",
                                             "vacuum-band", "mixed", "mms-steady", "gradient-forcing"};
  return v;
}

}  // namespace

PresetData preset_catalog(std::string_view id, double length, double mu_ref) {
  if (!(length > 0.0)) throw PreconditionError("preset_catalog: length must be positive");
  const double k = 2.0 * kPi / length;
  const FieldFunction zero = [](double, double) { return 0.0; };
  const FieldFunction one = [](double, double) { return 1.0; };
  const FieldFunction shear = [k](double x, double y) { return std::sin(k * x) * std::sin(2.0 * kPi * y); };

  PresetData d;
  if (id == "uniform") {
    d.density = one;
    d.velocity = zero;
    d.forcing = zero;
  } else if (id == "zero") {
    d.velocity = zero;
    d.forcing = zero;
  } else if (id == "stratified") {
    d.density = [](double, double y) { return 1.0 + 0.5 * std::cos(kPi * y); };
  } else if (id == "shear") {
    d.velocity = shear;
  } else if (id == "vacuum-band") {
    d.density = [k](double x, double) {
      const double s = std::max(0.0, std::sin(k * x));
      return s * s;
    };
  } else if (id == "mixed") {
    d.density = [k](double x, double y) {
      return 1.0 + 0.5 * std::cos(kPi * y) + 0.3 * std::sin(k * x + 0.5);
    };
    d.velocity = [k](double x, double y) {
      return std::sin(k * x) * std::sin(2.0 * kPi * y) +
             0.5 * std::cos(2.0 * k * x + 1.0) * std::sin(4.0 * kPi * y) +
             0.3 * std::cos(3.0 * k * x + 2.0) * std::sin(2.0 * kPi * y);
    };
  } else if (id == "mms-steady") {
    d.density = one;
    d.velocity = shear;
    d.forcing = [k, mu_ref](double x, double y) {
      return mu_ref * (k * k + 4.0 * kPi * kPi) * std::sin(k * x) * std::sin(2.0 * kPi * y) -
             k * std::sin(k * x);
    };
  } else if (id == "gradient-forcing") {
    d.forcing = [k](double x, double) { return k * std::sin(k * x); };
  } else {
    throw ConfigError("unknown preset '" + std::string(id) + "'");
  }
  return d;
}

std::vector<std::string> preset_ids() { return ids(); }

bool is_preset(std::string_view id) {
  const auto& v = ids();
  return std::find(v.begin(), v.end(), id) != v.end();
}

bool preset_provides(std::string_view id, PresetComponent component) {
  if (!is_preset(id)) return false;
  const PresetData d = preset_catalog(id);
  switch (component) {
    case PresetComponent::density:
      return d.density.has_value();
    case PresetComponent::velocity:
      return d.velocity.has_value();
    case PresetComponent::forcing:
      return d.forcing.has_value();
  }
  return false;
}

}  // namespace hydrostat
