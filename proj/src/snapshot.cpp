#include "sdns/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace sdns {

namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

void put_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v))
    throw std::runtime_error("snapshot: truncated header");
  return v;
}

}  // namespace

void write_snapshot(std::ostream& os, const Snapshot& s) {
  os.write("SDNS", 4);
  put_u32(os, kSnapshotVersion);
  put_u32(os, static_cast<std::uint32_t>(s.n_r));
  put_u32(os, static_cast<std::uint32_t>(s.n_theta));
  for (const auto& c : s.components) {
    if (c.rows() != s.n_r || c.cols() != s.n_theta)
      throw std::invalid_argument("snapshot: component shape mismatch");
    os.write(reinterpret_cast<const char*>(c.data()),
             static_cast<std::streamsize>(c.size() * sizeof(double)));
  }
  if (!os) throw std::runtime_error("snapshot: write failed");
}

Snapshot read_snapshot(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "SDNS", 4) != 0)
    throw std::runtime_error("snapshot: bad magic");
  const auto version = get_u32(is);
  if (version != kSnapshotVersion)
    throw std::runtime_error("snapshot: unsupported version " + std::to_string(version));
  Snapshot s;
  s.n_r = static_cast<int>(get_u32(is));
  s.n_theta = static_cast<int>(get_u32(is));
  // Components run to end of stream: one for scalars, two for vectors.
  const auto bytes = static_cast<std::streamsize>(s.n_r) * s.n_theta * sizeof(double);
  while (is.peek() != std::char_traits<char>::eof()) {
    Array2 c(s.n_r, s.n_theta);
    if (!is.read(reinterpret_cast<char*>(c.data()), bytes))
      throw std::runtime_error("snapshot: truncated data");
    s.components.push_back(std::move(c));
  }
  if (s.components.empty()) throw std::runtime_error("snapshot: no data");
  return s;
}

void write_snapshot_file(const std::string& path, const VectorField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("snapshot: cannot open " + path);
  write_snapshot(os, {static_cast<int>(f.u1.rows()), static_cast<int>(f.u1.cols()), {f.u1, f.u2}});
}

void write_snapshot_file(const std::string& path, const ScalarField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("snapshot: cannot open " + path);
  write_snapshot(os, {static_cast<int>(f.v.rows()), static_cast<int>(f.v.cols()), {f.v}});
}

Snapshot read_snapshot_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("snapshot: cannot open " + path);
  return read_snapshot(is);
}

}  // namespace sdns
