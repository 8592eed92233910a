#pragma once

#include "sdns/disk_grid.hpp"
#include "sdns/fields.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace sdns {

enum class Parity { Cos, Sin };

const char* to_string(Parity p);

/// One Stokes eigenpair with Navier slip conditions on the unit disk.
///
/// Streamfunction psi = norm_const * (J_n(sigma r) + harmonic_coeff r^n) trig(n theta)
/// with harmonic_coeff = -J_n(sigma), velocity a = grad_perp(psi) and
/// eigenvalue lambda = sigma^2.
struct Mode {
  int n = 0;
  Parity parity = Parity::Cos;
  int k = 1;
  double sigma = 0.0;
  double lambda = 0.0;
  double harmonic_coeff = 0.0;
  double norm_const = 0.0;
};

/// Identifies a mode before its wavenumber is known.
struct ModeKey {
  int n = 0;
  Parity parity = Parity::Cos;
  int k = 1;
};

/// Characteristic function of the slip eigenproblem,
///   F(sigma) = sigma^2 J_n(sigma) + (2 - alpha)(sigma J_n'(sigma) - n J_n(sigma)),
/// whose positive roots are the radial wavenumbers at angular order n.
double slip_characteristic(int n, double alpha, double sigma);

struct SigmaRoots {
  std::vector<double> sigmas;
  /// F also vanishes at sigma -> 0 to leading order: a zero-eigenvalue mode
  /// (rigid rotation for alpha = 0, n = 0). It is never returned in `sigmas`.
  bool degenerate_zero = false;
};

/// First `count` positive roots of slip_characteristic in increasing order,
/// each refined by bisection to a bracket narrower than 1e-12.
/// Throws std::invalid_argument for alpha < 0 or count < 1, and
/// std::runtime_error if fewer than `count` roots lie below `ceiling`.
SigmaRoots find_sigmas(int n, double alpha, int count, double ceiling = 500.0);

/// All positive roots below `ceiling`.
std::vector<double> sigmas_below(int n, double alpha, double ceiling);

/// Ordered truncated Stokes eigenbasis together with cached grid samples.
/// Immutable after construction; safe to share between threads.
class BasisSet {
 public:
  /// The `n_modes` smallest eigenvalues, ordered by lambda and then
  /// (n, cos before sin, k).
  static BasisSet build(double alpha, int n_modes, std::shared_ptr<const DiskGrid> grid);
  /// Explicit mode selection; duplicates are rejected.
  static BasisSet from_modes(double alpha, const std::vector<ModeKey>& keys,
                             std::shared_ptr<const DiskGrid> grid);

  double alpha() const { return alpha_; }
  int size() const { return static_cast<int>(modes_.size()); }
  const std::vector<Mode>& modes() const { return modes_; }
  const Mode& mode(int k) const { return modes_.at(k); }
  const DiskGrid& grid() const { return *grid_; }
  std::shared_ptr<const DiskGrid> grid_ptr() const { return grid_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  Eigen::VectorXd eigenvalues() const;

  VectorField mode_field(int k) const;
  ScalarField mode_curl(int k) const;

  /// Coefficients <f, a_k> by quadrature.
  Eigen::VectorXd analyze(const VectorField& f) const;
  /// sum_k c_k a_k on the grid; c may be shorter than size().
  VectorField synthesize(const Eigen::VectorXd& c) const;
  /// Orthogonal projection onto the span.
  VectorField project(const VectorField& f) const { return synthesize(analyze(f)); }

  /// Closed-form velocity of sum_k c_k a_k at an arbitrary point.
  Eigen::Vector2d evaluate(const Eigen::VectorXd& c, double r, double theta) const;
  /// Closed-form curl at an arbitrary point.
  double evaluate_curl(const Eigen::VectorXd& c, double r, double theta) const;

  /// Quadrature Gram matrices of the modes: gradient <.,.>_1 and boundary L^2.
  const Eigen::MatrixXd& gram_h1() const { return gram_h1_; }
  const Eigen::MatrixXd& gram_boundary() const { return gram_boundary_; }

  /// ||u||^2, ||u||_1^2 and ||u||_H^2 of the span element with coefficients c.
  double norm_l2_sq(const Eigen::VectorXd& c) const { return c.squaredNorm(); }
  double norm_h1_sq(const Eigen::VectorXd& c) const { return c.dot(gram_h1_ * c); }
  double norm_H_sq(const Eigen::VectorXd& c) const;

 private:
  BasisSet() = default;
  void sample();

  double alpha_ = 2.0;
  std::vector<Mode> modes_;
  std::shared_ptr<const DiskGrid> grid_;
  std::vector<std::string> warnings_;
  Eigen::MatrixXd samples_;    // (2P x N): stacked row-major u1 then u2
  Eigen::MatrixXd weighted_;   // samples_ scaled by quadrature weights
  Eigen::MatrixXd curls_;      // (P x N)
  Eigen::MatrixXd gram_h1_, gram_boundary_;
};

/// L^2 inner product over the disk.
double inner_l2(const DiskGrid& g, const VectorField& f, const VectorField& h);
double inner_l2(const DiskGrid& g, const ScalarField& f, const ScalarField& h);
/// Gradient inner product sum_j <d_j f, d_j h>.
double inner_h1(const DiskGrid& g, const VectorField& f, const VectorField& h);
/// L^2 inner product of the traces on the unit circle.
double inner_boundary(const DiskGrid& g, const VectorField& f, const VectorField& h);
/// <f,h>_H = <f,h>_1 - <(kappa - alpha) f, h>_boundary with kappa = 1.
double inner_H(const BasisSet& basis, const VectorField& f, const VectorField& h);

/// CSV with header n,parity,k,sigma,lambda,harmonic_coeff,norm_const.
void write_spectrum_csv(std::ostream& os, const BasisSet& basis);

}  // namespace sdns
