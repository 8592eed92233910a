#pragma once

#include "sdns/disk_basis.hpp"
#include "sdns/noise.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdns {

enum class Scheme { ItoEuler, StratHeun };
/// Galerkin: 1/2 sum (P_n P B_i)^2, the exact Ito-Stratonovich conversion of
/// the truncated system. Full: 1/2 sum P_n (P B_i)^2 evaluated on the grid.
enum class ItoCorrector { Galerkin, Full };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);
const char* to_string(ItoCorrector c);
ItoCorrector ito_corrector_from_string(const std::string& s);

struct NoiseConfig {
  bool enabled = true;
  int modes = 8;
  double decay_rate = 2.0;
  std::uint64_t seed = 1;
  BumpParams bump;
};

struct InitialCondition {
  enum class Type { Mode, Random, Coeffs };
  Type type = Type::Mode;
  int mode = 0;               // Mode: zero-based index into the ordered basis
  double amplitude = 1.0;     // Mode: coefficient; Random: L^2 norm if h1_norm <= 0
  std::uint64_t seed = 1;     // Random
  double h1_norm = 0.0;       // Random: target gradient norm when > 0
  int bandwidth = 0;          // Random: leading modes used, 0 for all
  std::vector<double> coeffs; // Coeffs
};

struct SimConfig {
  double nu = 0.1;
  double alpha = 2.0;
  int n_modes = 16;
  double dt = 1e-3;
  double t_end = 1.0;
  double hitting_M = 10.0;
  Scheme scheme = Scheme::StratHeun;
  ItoCorrector ito_corrector = ItoCorrector::Galerkin;
  bool integrating_factor = false;
  bool nonlinear = true;
  int n_r = 48;
  int n_theta = 64;
  NoiseConfig noise;
  InitialCondition ic;

  /// Throws std::invalid_argument naming the offending key.
  void validate() const;
  int n_steps() const;
};

/// Raised when a state stops being finite.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double t) : std::runtime_error(what), time(t) {}
  double time;
};

struct EnergyLedger {
  double l2_sq_initial = 0.0;
  double sup_l2_sq = 0.0;
  double int_h1_sq = 0.0;  // integral of ||u||_1^2
  double int_H_sq = 0.0;   // integral of ||u||_H^2
};

struct SolverState {
  double t = 0.0;
  int steps = 0;
  Eigen::VectorXd c;
  EnergyLedger ledger;
  std::optional<double> hit;
};

struct TrajectoryRow {
  double t, l2_sq, h1_sq, H_sq, energy_defect;
  bool hit;
  /// |<nonlinear drift, c>| / (|N(c)| |c|) at the start of the step.
  double antisymmetry;
};

struct TrajectoryOutput {
  std::vector<TrajectoryRow> rows;
  SolverState final_state;
  std::optional<double> hit_time;
  /// sup_t ||u||^2 + nu int ||u||_1^2 over the stopped trajectory.
  double stopped_functional = 0.0;
};

/// CSV with header t,l2_sq,h1_sq,H_sq,energy_defect,hit_flag.
void write_trajectory_csv(std::ostream& os, const TrajectoryOutput& out);

/// Coefficients of the initial condition in `basis`.
Eigen::VectorXd initial_coefficients(const InitialCondition& ic, const BasisSet& basis);

/// Velocity-form Galerkin SDE on the span of the first n Stokes modes.
class GalerkinSystem {
 public:
  GalerkinSystem(const SimConfig& cfg, std::shared_ptr<const BasisSet> basis,
                 const NoiseModel& noise);
  /// Builds grid, basis and noise library from cfg.
  explicit GalerkinSystem(const SimConfig& cfg);

  const SimConfig& config() const { return cfg_; }
  const BasisSet& basis() const { return *basis_; }
  std::shared_ptr<const BasisSet> basis_ptr() const { return basis_; }
  const NoiseModel& noise() const { return noise_; }
  int size() const { return basis_->size(); }
  int noise_modes() const { return static_cast<int>(K_.size()); }

  /// <L_{a_i} a_j, a_k> summed against c: analyze(advect(u, u)).
  Eigen::VectorXd nonlinear(const Eigen::VectorXd& c) const;
  /// Same quantity through synthesize -> advect -> Leray -> analyze.
  Eigen::VectorXd nonlinear_grid(const Eigen::VectorXd& c) const;

  /// Full drift; the Ito corrector is included only for the Ito scheme.
  Eigen::VectorXd drift(const Eigen::VectorXd& c) const;
  /// Drift of the Stratonovich form (no corrector).
  Eigen::VectorXd drift_stratonovich(const Eigen::VectorXd& c) const;
  /// g_i(c) = -analyze(P B_i u) for every noise mode (columns).
  Eigen::MatrixXd diffusion(const Eigen::VectorXd& c) const;

  /// K_i with (K_i)_{kj} = <B_i a_j, a_k>.
  const Eigen::MatrixXd& noise_matrix(int i) const { return K_.at(i); }
  const Eigen::MatrixXd& ito_corrector_matrix() const { return corrector_; }

  SolverState initial_state(const Eigen::VectorXd& c0) const;
  /// One step with increments dW (length noise_modes()); a hit state is returned unchanged.
  SolverState step_ito(const SolverState& s, const Eigen::VectorXd& dW, double dt) const;
  SolverState step_strat_heun(const SolverState& s, const Eigen::VectorXd& dW, double dt) const;
  SolverState step(const SolverState& s, const Eigen::VectorXd& dW, double dt) const;

  TrajectoryOutput run(const Eigen::VectorXd& c0, const BrownianPath& path) const;

 private:
  void precompute();
  Eigen::VectorXd viscous(const Eigen::VectorXd& c) const;
  SolverState finish_step(const SolverState& s, Eigen::VectorXd c_new, double dt) const;
  TrajectoryRow row_of(const SolverState& s) const;

  SimConfig cfg_;
  std::shared_ptr<const BasisSet> basis_;
  NoiseModel noise_;
  Eigen::VectorXd lambda_;
  Eigen::MatrixXd tensor_;  // (n x n^2): column i*n + j holds analyze(L_{a_i} a_j)
  std::vector<Eigen::MatrixXd> K_;
  Eigen::MatrixXd corrector_;
};

/// Brownian path for cfg: noise.seed, n_steps, dt and noise modes (zero
/// columns when noise is disabled).
BrownianPath path_for(const SimConfig& cfg, std::uint64_t seed);

TrajectoryOutput run_trajectory(const SimConfig& cfg);

struct EnsembleSummary {
  std::vector<double> functionals;
  std::vector<std::optional<double>> hit_times;
  double mean = 0.0;
  double max = 0.0;
  double std_error = 0.0;
};

/// Paths use seeds noise.seed ^ index.
EnsembleSummary ensemble(const SimConfig& cfg, int n_paths);
EnsembleSummary ensemble(const GalerkinSystem& sys, const Eigen::VectorXd& c0, int n_paths);

}  // namespace sdns
