#pragma once

#include "sdns/fields.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sdns {

/// Binary field snapshot: "SDNS", u32 version, u32 n_r, u32 n_theta, then
/// each component as little-endian float64, row-major (radial outer, angular
/// inner). Vector fields store u1 then u2; scalars store one component.
struct Snapshot {
  int n_r = 0;
  int n_theta = 0;
  std::vector<Array2> components;
};

constexpr unsigned kSnapshotVersion = 1;

void write_snapshot(std::ostream& os, const Snapshot& s);
Snapshot read_snapshot(std::istream& is);

void write_snapshot_file(const std::string& path, const VectorField& f);
void write_snapshot_file(const std::string& path, const ScalarField& f);
Snapshot read_snapshot_file(const std::string& path);

}  // namespace sdns
