#pragma once

// HPE1 binary snapshot, all integers and reals little endian:
//
//   "HPE1" | version u32 = 1 | Nx u32 | Ny u32 | L f64 | t f64 | count u32
//   count x ( name[16], NUL padded | kind u8 )
//   count x payload: Nx*(Ny+1) f64 row-major in (i, j) for fields,
//                    Nx f64 for profiles
//
// kind: 0 free field, 1 dirichlet_zero field, 2 pressure profile.

#include <cstdint>
#include <string>
#include <vector>

#include "hydrostat/grid_field.hpp"

namespace hydrostat {

struct SnapshotField {
  enum class Kind : std::uint8_t { free = 0, dirichlet = 1, profile = 2 };
  std::string name;
  Kind kind = Kind::free;
  std::vector<double> values;
};

struct Snapshot {
  std::uint32_t nx = 0;
  std::uint32_t ny = 0;
  double length = 1.0;
  double t = 0.0;
  std::vector<SnapshotField> fields;

  Snapshot() = default;
  Snapshot(const Grid& grid, double t);

  /// Names are at most 16 bytes and unique.
  void add(const std::string& name, const ScalarField& f);
  void add(const std::string& name, const PressureProfile& p);

  bool contains(const std::string& name) const;
  const SnapshotField& get(const std::string& name) const;
  Grid grid() const;
  /// Throws IoError when missing or of the wrong kind.
  ScalarField field(const std::string& name) const;
  PressureProfile profile(const std::string& name) const;

  friend bool operator==(const Snapshot&, const Snapshot&);
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const std::string& path, const Snapshot& s);
/// Throws IoError on open failure, bad magic, unsupported version, unknown
/// kind, or a payload whose length does not match the header.
Snapshot read_snapshot(const std::string& path);

}  // namespace hydrostat
