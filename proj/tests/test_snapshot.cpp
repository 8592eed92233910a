#include "doctest.h"

#include "sdns/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <sstream>
#include <stdexcept>

using namespace sdns;

namespace {

Snapshot make(int components) {
  Snapshot s;
  s.n_r = 3;
  s.n_theta = 4;
  for (int c = 0; c < components; ++c) {
    Array2 a(3, 4);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = 100.0 * c + 10.0 * i + j + 0.125;
    s.components.push_back(a);
  }
  return s;
}

std::uint32_t u32_at(const std::string& bytes, std::size_t off) {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + off);
  return p[0] | (p[1] << 8) | (p[2] << 16) | (std::uint32_t(p[3]) << 24);
}

}  // namespace

TEST_CASE("snapshot byte layout") {
  std::ostringstream os;
  write_snapshot(os, make(1));
  const std::string bytes = os.str();
  REQUIRE(bytes.size() == 16 + 12 * 8);
  CHECK(bytes.substr(0, 4) == "SDNS");
  CHECK(u32_at(bytes, 4) == kSnapshotVersion);
  CHECK(u32_at(bytes, 8) == 3);
  CHECK(u32_at(bytes, 12) == 4);
  // Row-major: the second stored value is (0, 1).
  double second;
  std::memcpy(&second, bytes.data() + 24, 8);
  CHECK(second == 1.125);
}

TEST_CASE("snapshot round trip") {
  for (int comps : {1, 2}) {
    const Snapshot s = make(comps);
    std::stringstream ss;
    write_snapshot(ss, s);
    const Snapshot back = read_snapshot(ss);
    CHECK(back.n_r == 3);
    CHECK(back.n_theta == 4);
    REQUIRE(back.components.size() == static_cast<std::size_t>(comps));
    for (int c = 0; c < comps; ++c) CHECK(back.components[c] == s.components[c]);
  }
}

TEST_CASE("snapshot files") {
  const auto dir = std::filesystem::temp_directory_path() / "sdns_snapshot_test";
  std::filesystem::create_directories(dir);
  const Snapshot s = make(2);
  const VectorField f{s.components[0], s.components[1]};
  write_snapshot_file((dir / "v.sdns").string(), f);
  const Snapshot back = read_snapshot_file((dir / "v.sdns").string());
  CHECK(back.components.size() == 2);
  CHECK(back.components[1] == f.u2);
  write_snapshot_file((dir / "s.sdns").string(), ScalarField{s.components[0]});
  CHECK(read_snapshot_file((dir / "s.sdns").string()).components.size() == 1);
  CHECK_THROWS_AS(read_snapshot_file((dir / "missing.sdns").string()), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("corrupt snapshots are rejected") {
  std::ostringstream os;
  write_snapshot(os, make(1));
  const std::string good = os.str();

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  std::istringstream a(bad_magic);
  CHECK_THROWS_AS(read_snapshot(a), std::runtime_error);

  std::string bad_version = good;
  bad_version[4] = 9;
  std::istringstream b(bad_version);
  CHECK_THROWS_AS(read_snapshot(b), std::runtime_error);

  std::istringstream c(good.substr(0, 10));
  CHECK_THROWS_AS(read_snapshot(c), std::runtime_error);
  std::istringstream d(good.substr(0, 40));
  CHECK_THROWS_AS(read_snapshot(d), std::runtime_error);
  std::istringstream e(good.substr(0, 16));
  CHECK_THROWS_AS(read_snapshot(e), std::runtime_error);

  Snapshot mismatched = make(1);
  mismatched.components.push_back(Array2::Zero(2, 2));
  std::ostringstream f;
  CHECK_THROWS_AS(write_snapshot(f, mismatched), std::invalid_argument);
}
