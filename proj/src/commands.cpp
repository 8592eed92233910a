#include "sdns/commands.hpp"

#include "sdns/disk_basis.hpp"
#include "sdns/format.hpp"
#include "sdns/snapshot.hpp"
#include "sdns/validation.hpp"
#include "sdns/vorticity.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#ifndef SDNS_VERSION
#define SDNS_VERSION "0.0.0"
#endif

namespace sdns {

const char* version() { return SDNS_VERSION; }

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

fs::path out_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return fs::path(cfg.out_dir) / name;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

void write_text(const fs::path& p, const std::string& text) {
  auto os = open_out(p);
  os << text;
  if (!os) throw std::runtime_error("write failed for " + p.string());
}

void write_manifest(const RunConfig& cfg, const std::string& command, Clock::time_point start,
                    const std::vector<std::string>& outputs) {
  const double wall = std::chrono::duration<double>(Clock::now() - start).count();
  const std::string canon = canonical_text(cfg);
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, fnv1a64(canon));
  std::ostringstream os;
  os << "command = " << command << '\n'
     << "version = " << version() << '\n'
     << "eigen = " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.'
     << EIGEN_MINOR_VERSION << '\n'
     << "compiler = " << __VERSION__ << '\n'
     << "config_hash = fnv1a64:" << hash << '\n'
     << "wall_time_s = " << fmt17(wall) << '\n'
     << "outputs =";
  for (std::size_t i = 0; i < outputs.size(); ++i) os << (i ? ", " : " ") << outputs[i];
  os << "\n\n[config]\n" << canon;
  write_text(out_path(cfg, "manifest_" + command + ".txt"), os.str());
}

template <class F>
void for_each_parallel(int count, F&& f) {
  std::vector<std::exception_ptr> errors(count);
  const int workers = std::max(1, std::min<int>(count, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int k = w; k < count; k += workers) {
        try {
          f(k);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (int k = 0; k < count; ++k) {
    if (!errors[k]) continue;
    try {
      std::rethrow_exception(errors[k]);
    } catch (const std::exception& e) {
      throw std::runtime_error("path " + std::to_string(k) + ": " + e.what());
    }
  }
}

std::string path_suffix(const RunConfig& cfg, int p) {
  return cfg.paths > 1 ? "_p" + std::to_string(p) : "";
}

std::uint64_t path_seed(const RunConfig& cfg, int p) {
  return cfg.sim.noise.seed ^ static_cast<std::uint64_t>(p);
}

std::vector<std::string> simulate_velocity(const RunConfig& cfg, std::ostream& log) {
  const GalerkinSystem sys(cfg.sim);
  const Eigen::VectorXd c0 = initial_coefficients(cfg.sim.ic, sys.basis());
  std::vector<TrajectoryOutput> runs(cfg.paths);
  for_each_parallel(cfg.paths, [&](int p) {
    runs[p] = sys.run(c0, path_for(cfg.sim, path_seed(cfg, p)));
    auto os = open_out(out_path(cfg, "trajectory" + path_suffix(cfg, p) + ".csv"));
    write_trajectory_csv(os, runs[p]);
  });

  std::vector<std::string> files;
  for (int p = 0; p < cfg.paths; ++p) files.push_back("trajectory" + path_suffix(cfg, p) + ".csv");
  if (cfg.paths == 1) {
    write_snapshot_file(out_path(cfg, "final_velocity.sdns").string(),
                        sys.basis().synthesize(runs[0].final_state.c));
    files.push_back("final_velocity.sdns");
    const auto& last = runs[0].rows.back();
    log << "t = " << fmt17(last.t) << "  ||u||^2 = " << fmt17(last.l2_sq)
        << "  energy defect = " << fmt17(last.energy_defect)
        << (runs[0].hit_time ? "  hit at t = " + fmt17(*runs[0].hit_time) : "") << '\n';
  } else {
    std::ostringstream os;
    os << "path,seed,stopped_functional,hit_time\n";
    for (int p = 0; p < cfg.paths; ++p) {
      os << p << ',' << path_seed(cfg, p) << ',' << fmt17(runs[p].stopped_functional) << ','
         << fmt17(runs[p].hit_time.value_or(std::numeric_limits<double>::quiet_NaN())) << '\n';
    }
    write_text(out_path(cfg, "ensemble.csv"), os.str());
    files.push_back("ensemble.csv");
    log << cfg.paths << " paths written\n";
  }
  return files;
}

std::vector<std::string> simulate_vorticity(const RunConfig& cfg, std::ostream& log) {
  const VorticitySystem sys(cfg.sim);
  const Eigen::VectorXd w0 = initial_vorticity(cfg.sim.ic, sys.basis());
  std::vector<VorticityOutput> runs(cfg.paths);
  for_each_parallel(cfg.paths, [&](int p) {
    runs[p] = sys.run(w0, path_for(cfg.sim, path_seed(cfg, p)));
    auto os = open_out(out_path(cfg, "vorticity" + path_suffix(cfg, p) + ".csv"));
    write_vorticity_csv(os, runs[p]);
  });
  std::vector<std::string> files;
  for (int p = 0; p < cfg.paths; ++p) files.push_back("vorticity" + path_suffix(cfg, p) + ".csv");
  if (cfg.paths == 1) {
    write_snapshot_file(out_path(cfg, "final_vorticity.sdns").string(),
                        sys.basis().synthesize(runs[0].final_state.w));
    files.push_back("final_vorticity.sdns");
    const auto& last = runs[0].rows.back();
    log << "t = " << fmt17(last.t) << "  ||w||^2 = " << fmt17(last.enstrophy)
        << "  enstrophy defect = " << fmt17(last.enstrophy_defect) << '\n';
  } else {
    log << cfg.paths << " paths written\n";
  }
  return files;
}

}  // namespace

int cmd_spectrum(const RunConfig& cfg, std::ostream& log) {
  const auto start = Clock::now();
  const BasisSet basis = BasisSet::build(
      cfg.sim.alpha, cfg.sim.n_modes, std::make_shared<const DiskGrid>(cfg.sim.n_r, cfg.sim.n_theta));
  for (const auto& w : basis.warnings()) log << "warning: " << w << '\n';
  auto os = open_out(out_path(cfg, "spectrum.csv"));
  write_spectrum_csv(os, basis);
  os.close();
  log << basis.size() << " modes, lambda_1 = " << fmt17(basis.mode(0).lambda) << '\n';
  write_manifest(cfg, "spectrum", start, {"spectrum.csv"});
  return 0;
}

int cmd_validate(const RunConfig& cfg, std::ostream& log) {
  const auto start = Clock::now();
  const ValidationParams p{cfg.validate_samples, cfg.validate_seed};
  const auto checks = run_validation(cfg.sim, cfg.sweep_nu_list, p);
  std::ostringstream report;
  write_validation_report(report, checks);
  write_text(out_path(cfg, "validate_report.txt"), report.str());
  log << report.str();
  write_manifest(cfg, "validate", start, {"validate_report.txt"});
  return all_passed(checks) ? 0 : 1;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  const auto start = Clock::now();
  const auto files = cfg.formulation == Formulation::Velocity ? simulate_velocity(cfg, log)
                                                              : simulate_vorticity(cfg, log);
  write_manifest(cfg, "simulate", start, files);
  return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  const auto start = Clock::now();
  const auto entries = viscosity_sweep(cfg.sim, cfg.sweep_nu_list);
  auto os = open_out(out_path(cfg, "sweep.csv"));
  write_sweep_csv(os, entries);
  os.close();
  for (const auto& e : entries)
    log << "nu = " << fmt17(e.nu) << "  sup ||u||_1 = " << fmt17(e.sup_h1_norm)
        << "  sup diff to next = " << fmt17(e.sup_l2_diff_to_next) << '\n';
  write_manifest(cfg, "sweep", start, {"sweep.csv"});
  return 0;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& log) {
  if (name == "spectrum") return cmd_spectrum(cfg, log);
  if (name == "validate") return cmd_validate(cfg, log);
  if (name == "simulate") return cmd_simulate(cfg, log);
  if (name == "sweep") return cmd_sweep(cfg, log);
  throw std::invalid_argument("unknown command '" + name + "'");
}

}  // namespace sdns
