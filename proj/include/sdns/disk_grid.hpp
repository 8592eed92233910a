#pragma once

#include <Eigen/Dense>

#include <vector>

namespace sdns {

/// Samples on the polar tensor grid: rows are radial nodes, columns are
/// angular nodes (radial outer, angular inner).
using Array2 = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Tensor quadrature grid on the unit disk: Gauss-Legendre in r mapped to
/// (0,1) with the Jacobian r folded into the weights, uniform trapezoid in
/// theta. No node sits at r = 0 or r = 1.
///
/// Besides quadrature the grid owns every precomputed spectral operator the
/// field operators need: radial barycentric differentiation, Fourier
/// differentiation in theta, 3/2 zero-padding in theta, extrapolation to the
/// boundary circle and the per-wavenumber Dirichlet Poisson factorizations.
/// Immutable after construction.
class DiskGrid {
 public:
  DiskGrid(int n_r, int n_theta);

  int n_r() const { return n_r_; }
  int n_theta() const { return n_theta_; }
  int padded_n_theta() const { return n_pad_; }

  const Eigen::VectorXd& r_nodes() const { return r_; }
  const Eigen::VectorXd& r_weights() const { return r_w_; }
  const Eigen::VectorXd& theta_nodes() const { return theta_; }

  /// Full 2D quadrature weights r_w * 2pi/n_theta.
  const Array2& weights() const { return weights_; }
  const Array2& cos_theta() const { return cos_; }
  const Array2& sin_theta() const { return sin_; }
  const Array2& inv_r() const { return inv_r_; }
  /// Cartesian coordinates of the nodes.
  const Array2& x() const { return x_; }
  const Array2& y() const { return y_; }

  const Eigen::MatrixXd& radial_diff() const { return d_r_; }
  const Eigen::MatrixXd& angular_diff() const { return d_theta_; }

  bool matches(const Array2& f) const { return f.rows() == n_r_ && f.cols() == n_theta_; }
  Array2 zeros() const { return Array2::Zero(n_r_, n_theta_); }

  double integrate(const Array2& f) const;
  /// Trapezoid integral over the unit circle of boundary samples.
  double integrate_boundary(const Eigen::VectorXd& g) const;

  Array2 d_r(const Array2& f) const;
  Array2 d_theta(const Array2& f) const;
  Array2 d_x(const Array2& f) const;
  Array2 d_y(const Array2& f) const;
  /// Scalar Laplacian f_rr + f_r / r + f_thetatheta / r^2.
  Array2 laplacian(const Array2& f) const;

  /// Values at r = 1 by barycentric extrapolation of each angular column.
  Eigen::VectorXd boundary_values(const Array2& f) const;

  /// Spectral interpolation at an arbitrary point of the closed disk.
  double interpolate(const Array2& f, double r, double theta) const;

  /// Trig interpolation onto padded_n_theta() angles, dropping the Nyquist mode.
  Array2 upsample_theta(const Array2& f) const;
  /// Inverse of upsample_theta: keep |m| < n_theta/2 and resample.
  Array2 downsample_theta(const Array2& f) const;
  /// Pointwise product with 3/2 zero padding in theta.
  Array2 dealiased_product(const Array2& a, const Array2& b) const;

  /// Dirichlet solve of Laplace(psi) = rhs with psi = 0 on r = 1.
  /// Returns psi and its radial derivative on the nodes.
  struct PoissonSolution {
    Array2 psi;
    Array2 psi_r;
  };
  PoissonSolution solve_dirichlet_poisson(const Array2& rhs) const;

  /// Real Fourier coefficients per radius: columns [a_0, a_1, b_1, ..., a_{N/2}].
  Array2 fourier_analyze(const Array2& f) const;
  Array2 fourier_synthesize(const Array2& coeffs) const;
  /// Angular wavenumber of a fourier_analyze column.
  int wavenumber(int column) const;

 private:
  int n_r_;
  int n_theta_;
  int n_pad_;
  Eigen::VectorXd r_, r_w_, theta_;
  Eigen::VectorXd bary_w_;
  Array2 weights_, cos_, sin_, inv_r_, x_, y_;
  Eigen::MatrixXd d_r_, d_theta_;
  Eigen::RowVectorXd to_boundary_;
  Eigen::MatrixXd up_, down_;                // (n_pad x n_theta), (n_theta x n_pad)
  Eigen::MatrixXd analyze_, synthesize_;     // (n_theta x n_theta)
  Eigen::MatrixXd ext_d_;                    // differentiation on r nodes plus r = 1
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> poisson_lu_;
};

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Barycentric weights for arbitrary distinct nodes.
Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& nodes);

/// First-derivative matrix of the polynomial interpolant through `nodes`.
Eigen::MatrixXd barycentric_diff_matrix(const Eigen::VectorXd& nodes);

}  // namespace sdns
