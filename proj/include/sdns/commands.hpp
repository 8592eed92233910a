#pragma once

#include "sdns/config.hpp"

#include <iosfwd>
#include <string>

namespace sdns {

/// Library version recorded in run manifests.
const char* version();

// Each command writes its outputs under cfg.out_dir (created if missing)
// plus manifest_<command>.txt, logs progress to `log`, and returns the
// process exit status. Failures other than failed checks throw.

/// spectrum.csv for the configured basis.
int cmd_spectrum(const RunConfig& cfg, std::ostream& log);
/// validate_report.txt with every invariant; status 1 if any check fails.
int cmd_validate(const RunConfig& cfg, std::ostream& log);
/// Velocity form: trajectory.csv and final_velocity.sdns for one path, or
/// trajectory_p<k>.csv per path plus ensemble.csv when sim.paths > 1.
/// Vorticity form: vorticity.csv and final_vorticity.sdns.
int cmd_simulate(const RunConfig& cfg, std::ostream& log);
/// sweep.csv over sweep.nu_list.
int cmd_sweep(const RunConfig& cfg, std::ostream& log);

/// Dispatch by subcommand name; throws std::invalid_argument for unknown names.
int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log);

}  // namespace sdns
