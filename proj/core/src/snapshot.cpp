#include "hydrostat/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "hydrostat/errors.hpp"

namespace hydrostat {

namespace {

static_assert(sizeof(double) == 8 && std::numeric_limits<double>::is_iec559);

constexpr char kMagic[4] = {'H', 'P', 'E', '1'};
constexpr std::size_t kNameBytes = 16;

template <typename U>
void put_le(std::vector<char>& out, U v) {
  for (std::size_t b = 0; b < sizeof(U); ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

void put_f64(std::vector<char>& out, double d) { put_le(out, std::bit_cast<std::uint64_t>(d)); }

class Reader {
 public:
  Reader(const std::vector<char>& buf, const std::string& path) : buf_(buf), path_(path) {}

  template <typename U>
  U get() {
    need(sizeof(U));
    U v = 0;
    for (std::size_t b = 0; b < sizeof(U); ++b) {
      v |= static_cast<U>(static_cast<unsigned char>(buf_[pos_ + b])) << (8 * b);
    }
    pos_ += sizeof(U);
    return v;
  }
  double f64() { return std::bit_cast<double>(get<std::uint64_t>()); }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s(buf_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return buf_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw IoError(path_ + ": length mismatch (file truncated)");
  }
  const std::vector<char>& buf_;
  const std::string& path_;
  std::size_t pos_ = 0;
};

std::size_t payload_length(const Snapshot& s, SnapshotField::Kind kind) {
  return kind == SnapshotField::Kind::profile ? s.nx : static_cast<std::size_t>(s.nx) * (s.ny + 1);
}

}  // namespace

Snapshot::Snapshot(const Grid& grid, double time)
    : nx(static_cast<std::uint32_t>(grid.nx())),
      ny(static_cast<std::uint32_t>(grid.ny())),
      length(grid.length()),
      t(time) {}

void Snapshot::add(const std::string& name, const ScalarField& f) {
  if (name.empty() || name.size() > kNameBytes) throw PreconditionError("Snapshot: bad field name '" + name + "'");
  if (contains(name)) throw PreconditionError("Snapshot: duplicate field '" + name + "'");
  if (static_cast<std::uint32_t>(f.grid().nx()) != nx || static_cast<std::uint32_t>(f.grid().ny()) != ny) {
    throw PreconditionError("Snapshot: field '" + name + "' is on a different grid");
  }
  const auto v = f.values();
  fields.push_back({name,
                    f.bc() == BoundaryY::dirichlet_zero ? SnapshotField::Kind::dirichlet
                                                        : SnapshotField::Kind::free,
                    std::vector<double>(v.begin(), v.end())});
}

void Snapshot::add(const std::string& name, const PressureProfile& p) {
  if (name.empty() || name.size() > kNameBytes) throw PreconditionError("Snapshot: bad field name '" + name + "'");
  if (contains(name)) throw PreconditionError("Snapshot: duplicate field '" + name + "'");
  if (static_cast<std::uint32_t>(p.grid().nx()) != nx) {
    throw PreconditionError("Snapshot: profile '" + name + "' is on a different grid");
  }
  const auto v = p.values();
  fields.push_back({name, SnapshotField::Kind::profile, std::vector<double>(v.begin(), v.end())});
}

bool Snapshot::contains(const std::string& name) const {
  return std::any_of(fields.begin(), fields.end(), [&](const auto& f) { return f.name == name; });
}

const SnapshotField& Snapshot::get(const std::string& name) const {
  for (const auto& f : fields) {
    if (f.name == name) return f;
  }
  throw IoError("snapshot has no field '" + name + "'");
}

Grid Snapshot::grid() const {
  try {
    return make_grid(length, static_cast<int>(nx), static_cast<int>(ny));
  } catch (const PreconditionError& e) {
    throw IoError(std::string("snapshot grid is invalid: ") + e.what());
  }
}

ScalarField Snapshot::field(const std::string& name) const {
  const SnapshotField& f = get(name);
  if (f.kind == SnapshotField::Kind::profile) throw IoError("snapshot field '" + name + "' is a profile");
  return ScalarField(grid(),
                     f.kind == SnapshotField::Kind::dirichlet ? BoundaryY::dirichlet_zero : BoundaryY::free,
                     f.values);
}

PressureProfile Snapshot::profile(const std::string& name) const {
  const SnapshotField& f = get(name);
  if (f.kind != SnapshotField::Kind::profile) throw IoError("snapshot field '" + name + "' is not a profile");
  return PressureProfile(grid(), f.values);
}

bool operator==(const Snapshot& a, const Snapshot& b) {
  auto bits = [](double d) { return std::bit_cast<std::uint64_t>(d); };
  if (a.nx != b.nx || a.ny != b.ny || bits(a.length) != bits(b.length) || bits(a.t) != bits(b.t) ||
      a.fields.size() != b.fields.size()) {
    return false;
  }
  for (std::size_t k = 0; k < a.fields.size(); ++k) {
    const auto& fa = a.fields[k];
    const auto& fb = b.fields[k];
    if (fa.name != fb.name || fa.kind != fb.kind || fa.values.size() != fb.values.size()) return false;
    for (std::size_t i = 0; i < fa.values.size(); ++i) {
      if (bits(fa.values[i]) != bits(fb.values[i])) return false;
    }
  }
  return true;
}

void write_snapshot(const std::string& path, const Snapshot& s) {
  std::vector<char> out;
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_le<std::uint32_t>(out, kSnapshotVersion);
  put_le<std::uint32_t>(out, s.nx);
  put_le<std::uint32_t>(out, s.ny);
  put_f64(out, s.length);
  put_f64(out, s.t);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.fields.size()));
  for (const auto& f : s.fields) {
    if (f.name.size() > kNameBytes) throw PreconditionError("write_snapshot: field name too long");
    if (f.values.size() != payload_length(s, f.kind)) {
      throw PreconditionError("write_snapshot: field '" + f.name + "' has the wrong length");
    }
    char name[kNameBytes] = {};
    std::memcpy(name, f.name.data(), f.name.size());
    out.insert(out.end(), name, name + kNameBytes);
    out.push_back(static_cast<char>(f.kind));
  }
  for (const auto& f : s.fields) {
    for (double d : f.values) put_f64(out, d);
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw IoError("write to '" + path + "' failed");
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  const std::vector<char> buf((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  Reader r(buf, path);
  if (r.bytes(4) != std::string(kMagic, 4)) throw IoError(path + ": bad magic (not an HPE1 snapshot)");
  const auto version = r.get<std::uint32_t>();
  if (version != kSnapshotVersion) {
    throw IoError(path + ": unsupported snapshot version " + std::to_string(version));
  }
  Snapshot s;
  s.nx = r.get<std::uint32_t>();
  s.ny = r.get<std::uint32_t>();
  s.length = r.f64();
  s.t = r.f64();
  const auto count = r.get<std::uint32_t>();
  for (std::uint32_t k = 0; k < count; ++k) {
    std::string name = r.bytes(kNameBytes);
    name.resize(std::strlen(name.c_str()));
    const auto kind = r.get<std::uint8_t>();
    if (kind > 2) throw IoError(path + ": unknown field kind " + std::to_string(kind));
    s.fields.push_back({std::move(name), static_cast<SnapshotField::Kind>(kind), {}});
  }
  std::size_t need = 0;
  for (const auto& f : s.fields) need += payload_length(s, f.kind) * 8;
  if (r.remaining() != need) {
    throw IoError(path + ": length mismatch (payload has " + std::to_string(r.remaining()) +
                  " bytes, header implies " + std::to_string(need) + ")");
  }
  for (auto& f : s.fields) {
    f.values.resize(payload_length(s, f.kind));
    for (double& d : f.values) d = r.f64();
  }
  return s;
}

}  // namespace hydrostat
