#pragma once

#include "sdns/disk_grid.hpp"
#include "sdns/fields.hpp"
#include "sdns/galerkin.hpp"
#include "sdns/noise.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

namespace sdns {

/// One Dirichlet Fourier-Bessel mode e = N J_n(sigma r) trig(n theta), J_n(sigma) = 0.
struct DirichletMode {
  int n = 0;
  Parity parity = Parity::Cos;
  int k = 1;
  double sigma = 0.0;
  double norm_const = 0.0;
};

/// L^2-orthonormal Dirichlet eigenbasis of the Laplacian, ordered by sigma
/// and then (n, cos before sin, k), with cached grid samples of each mode,
/// its gradient and the velocity grad_perp(e_k).
class DirichletBasis {
 public:
  DirichletBasis(int n_modes, std::shared_ptr<const DiskGrid> grid);

  int size() const { return static_cast<int>(modes_.size()); }
  const DirichletMode& mode(int k) const { return modes_.at(k); }
  const std::vector<DirichletMode>& modes() const { return modes_; }
  const DiskGrid& grid() const { return *grid_; }
  std::shared_ptr<const DiskGrid> grid_ptr() const { return grid_; }
  Eigen::VectorXd sigmas() const;

  ScalarField synthesize(const Eigen::VectorXd& w) const;
  Eigen::VectorXd analyze(const ScalarField& s) const;

  /// Biot-Savart: psi_k = -w_k / sigma_k^2, u = grad_perp(psi).
  VectorField velocity(const Eigen::VectorXd& w) const;
  /// grad(sum w_k e_k) on the grid.
  VectorField gradient(const Eigen::VectorXd& w) const;

  /// ||u||^2 and ||u||_1^2 of the velocity of w.
  double velocity_l2_sq(const Eigen::VectorXd& w) const;
  double velocity_h1_sq(const Eigen::VectorXd& w) const { return w.dot(velocity_gram_h1_ * w); }
  /// ||w||^2_{W^{1,2}_0} = sum sigma_k^2 w_k^2.
  double grad_sq(const Eigen::VectorXd& w) const;

 private:
  std::shared_ptr<const DiskGrid> grid_;
  std::vector<DirichletMode> modes_;
  Eigen::MatrixXd values_;     // (N x P)
  Eigen::MatrixXd weighted_;   // values_ scaled by quadrature weights
  Eigen::MatrixXd grads_;      // (2N x P): d_x e_k then d_y e_k
  Eigen::MatrixXd vels_;       // (2N x P): velocity of w = e_k
  Eigen::MatrixXd velocity_gram_h1_;
};

/// Velocity of a vorticity field given on the grid: Dirichlet Poisson solve
/// of laplacian(psi) = w followed by grad_perp.
VectorField velocity_from_vorticity(const DiskGrid& g, const ScalarField& w);

struct EnstrophyLedger {
  double enstrophy_initial = 0.0;
  double int_grad_sq = 0.0;  // integral of ||w||^2_{W^{1,2}_0}
};

struct VorticityState {
  double t = 0.0;
  int steps = 0;
  Eigen::VectorXd w;
  EnstrophyLedger ledger;
};

struct VorticityRow {
  double t, enstrophy, grad_sq, l2_sq, h1_sq, enstrophy_defect;
};

struct VorticityOutput {
  std::vector<VorticityRow> rows;
  VorticityState final_state;
  /// Coefficients at every step when requested.
  std::vector<Eigen::VectorXd> history;
};

/// CSV with header t,enstrophy,grad_w_sq,l2_sq,h1_sq,enstrophy_defect.
void write_vorticity_csv(std::ostream& os, const VorticityOutput& out);

/// Vorticity-form Galerkin SDE for the free boundary condition alpha = 2.
class VorticitySystem {
 public:
  VorticitySystem(const SimConfig& cfg, std::shared_ptr<const DirichletBasis> basis,
                  const NoiseModel& noise);
  explicit VorticitySystem(const SimConfig& cfg);

  const SimConfig& config() const { return cfg_; }
  const DirichletBasis& basis() const { return *basis_; }
  std::shared_ptr<const DirichletBasis> basis_ptr() const { return basis_; }
  const NoiseModel& noise() const { return noise_; }
  int size() const { return basis_->size(); }
  int noise_modes() const { return static_cast<int>(L_.size()); }

  /// analyze(u . grad w) with u the velocity of w.
  Eigen::VectorXd nonlinear(const Eigen::VectorXd& w) const;
  Eigen::VectorXd nonlinear_grid(const Eigen::VectorXd& w) const;

  Eigen::VectorXd drift(const Eigen::VectorXd& w) const;
  Eigen::VectorXd drift_stratonovich(const Eigen::VectorXd& w) const;
  Eigen::MatrixXd diffusion(const Eigen::VectorXd& w) const;

  /// (L_i)_{kj} = <xi_i . grad e_j, e_k>.
  const Eigen::MatrixXd& noise_matrix(int i) const { return L_.at(i); }

  VorticityState initial_state(const Eigen::VectorXd& w0) const;
  VorticityState step_ito(const VorticityState& s, const Eigen::VectorXd& dW, double dt) const;
  VorticityState step_strat_heun(const VorticityState& s, const Eigen::VectorXd& dW,
                                 double dt) const;
  VorticityState step(const VorticityState& s, const Eigen::VectorXd& dW, double dt) const;

  VorticityOutput run(const Eigen::VectorXd& w0, const BrownianPath& path,
                      bool keep_history = false) const;

 private:
  void precompute();
  VorticityState finish_step(const VorticityState& s, Eigen::VectorXd w_new, double dt) const;
  VorticityRow row_of(const VorticityState& s) const;

  SimConfig cfg_;
  std::shared_ptr<const DirichletBasis> basis_;
  NoiseModel noise_;
  Eigen::VectorXd sigma2_;
  Eigen::MatrixXd tensor_;  // column i*n + j: analyze(u(e_i) . grad e_j)
  std::vector<Eigen::MatrixXd> L_;
  Eigen::MatrixXd corrector_;
};

/// Vorticity coefficients of the initial condition: the Stokes-mode
/// coefficients of cfg.ic (alpha = 2) mapped by w_k = -sigma_k c_k.
Eigen::VectorXd initial_vorticity(const InitialCondition& ic, const DirichletBasis& basis);

struct SweepEntry {
  double nu;
  double sup_l2_diff_to_next;  // NaN for the last entry
  double sup_h1_norm;
  double enstrophy_defect_T;
};

/// Runs the vorticity system for each viscosity on one shared path and
/// initial condition. nu_list must be non-increasing; alpha must be 2.
std::vector<SweepEntry> viscosity_sweep(const SimConfig& base, const std::vector<double>& nu_list);

/// CSV with header nu,sup_l2_diff_to_next,sup_h1_norm,enstrophy_defect_T.
void write_sweep_csv(std::ostream& os, const std::vector<SweepEntry>& entries);

}  // namespace sdns
