#pragma once

// Finite-difference reference operators on a uniform polar grid. Simple,
// dense and slow on purpose; nothing here is shared with the spectral code.

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace sdns_oracle {

/// J_n(x) from the trapezoid rule on (1/2pi) int cos(n t - x sin t) dt,
/// which converges geometrically for a periodic integrand.
double fd_bessel_j(int n, double x);

/// Uniform polar grid: r_i = (i + 1/2) h_r, theta_j = j h_theta.
struct FdGrid {
  FdGrid(int n_r, int n_theta);

  int n_r, n_theta;
  double h_r, h_theta;

  double r(int i) const { return (i + 0.5) * h_r; }
  double theta(int j) const { return j * h_theta; }
  /// The grid with spacing divided by `factor`. Odd factors keep every
  /// coarse node on the fine grid.
  FdGrid refined(int factor) const { return FdGrid(n_r * factor, n_theta * factor); }
};

/// Rows are radial nodes, columns angular nodes.
using FdField = Eigen::MatrixXd;
using PlaneFunction = std::function<double(double x, double y)>;

FdField fd_sample(const FdGrid& g, const PlaneFunction& f);
/// Values of a fine-grid field at the nodes of the grid it was refined from.
FdField fd_restrict(const FdField& fine, const FdGrid& coarse, int factor);

/// Finite-difference weights for derivative `order` at 0 from the given
/// offsets (Fornberg's recursion).
std::vector<double> fd_weights(const std::vector<double>& offsets, int order);

struct FdGradient {
  FdField dx, dy;
};

/// Fourth-order d/dx and d/dy: centered stencils in theta, centered in r
/// with reflection through the origin, one-sided at the outer rim.
/// Throws std::invalid_argument for grids below 16 nodes or odd n_theta.
FdGradient fd_derivatives(const FdField& f, const FdGrid& g);

/// fd_derivatives on g and on g.refined(3), combined as (81 D_fine - D)/80.
/// The rim nodes keep fourth order.
FdGradient fd_derivatives_richardson(const PlaneFunction& f, const FdGrid& g);

/// d_x f_1 + d_y f_2 with Richardson extrapolation.
FdField fd_divergence(const PlaneFunction& f1, const PlaneFunction& f2, const FdGrid& g);

/// Second-order solve of laplacian(psi) = rhs with psi = 0 at r = 1: real
/// DFT in theta, flux-form three-point radial operator per wavenumber.
FdField fd_poisson_dirichlet(const FdField& rhs, const FdGrid& g);

struct FdHelmholtz {
  FdField div_free_1, div_free_2;
  FdField gradient_1, gradient_2;
};

/// f = grad_perp(psi) + gradient part, psi from the Dirichlet problem for curl f.
FdHelmholtz fd_helmholtz_decompose(const FdField& f1, const FdField& f2, const FdGrid& g);

/// fd_helmholtz_decompose of sampled f on g and g.refined(3), each part
/// combined as (9 P_fine - P)/8 to cancel the O(h^2) Poisson error.
FdHelmholtz fd_helmholtz_richardson(const PlaneFunction& f1, const PlaneFunction& f2,
                                    const FdGrid& g);

/// Area quadrature (midpoint in r, trapezoid in theta).
double fd_integrate(const FdField& f, const FdGrid& g);

/// Smallest positive eigenvalues of the slip Stokes problem at angular order
/// n: -lap^2 psi = lambda lap psi, psi(1) = 0, lap psi(1) = (2 - alpha) psi_r(1).
/// Second order in h = 1/n_r. Eigenvalues that do not reappear within 1% on
/// the grid with n_r/2 are discarded as spurious.
std::vector<double> fd_stokes_eigs(double alpha, int n, int n_r, int count);

}  // namespace sdns_oracle
