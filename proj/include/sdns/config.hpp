#pragma once

#include "sdns/galerkin.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdns {

enum class Formulation { Velocity, Vorticity };

/// Everything a subcommand needs: the simulation settings plus orchestration
/// options. Numeric ranges are checked by parse_config.
struct RunConfig {
  SimConfig sim;
  Formulation formulation = Formulation::Velocity;
  int paths = 1;
  std::vector<double> sweep_nu_list{0.1, 0.05, 0.025, 0.0125};
  int validate_samples = 100;
  std::uint64_t validate_seed = 1;
  std::string out_dir = ".";
  int verbosity = 0;
};

/// Parse errors carry the origin ("file:line" or "--set") and key path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a key = value file with optional [section] headers; a key inside
/// [sim.ic] is addressed as sim.ic.key. '#' starts a comment. Overrides are
/// "key=value" strings applied after the file. Unknown keys, repeated keys,
/// malformed values and range violations throw ConfigError.
RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides);
/// Same as parse_config with the file contents given directly.
RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides,
                            const std::string& origin = "<text>");

/// Every key with its current value, one "key = value" line each, in a fixed
/// order. Two configs behave identically iff their canonical texts match.
std::string canonical_text(const RunConfig& cfg);
/// All accepted keys.
std::vector<std::string> config_keys();

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace sdns
