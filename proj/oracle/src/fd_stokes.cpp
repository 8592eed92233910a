#include "sdns_oracle/fd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdns_oracle {

namespace {

// Eigenvalues of the vorticity form -lap phi = lambda phi, where the boundary
// value of phi is tied to psi = lap_D^{-1} phi through phi(1) = (2 - alpha) psi_r(1).
std::vector<double> raw_eigs(double alpha, int n, int nr) {
  const double h = 1.0 / nr;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(nr, nr);
  for (int i = 0; i < nr; ++i) {
    const double r = (i + 0.5) * h;
    const double r_in = (i == 0) ? 0.0 : r - 0.5 * h;
    const double r_out = r + 0.5 * h;
    if (i > 0) L(i, i - 1) = r_in / (r * h * h);
    if (i + 1 < nr) L(i, i + 1) = r_out / (r * h * h);
    L(i, i) = -(r_in + r_out) / (r * h * h) - static_cast<double>(n) * n / (r * r);
  }
  const double r_last = 1.0 - 0.5 * h;
  const double ghost = 1.0 / (r_last * h * h);  // coefficient of the ghost value
  L(nr - 1, nr - 1) -= ghost;                   // Dirichlet part: ghost = 2b - phi_last

  // psi_r(1) = -2 psi_last / h for the Dirichlet streamfunction.
  Eigen::VectorXd e = Eigen::VectorXd::Zero(nr);
  e[nr - 1] = 1.0;
  const Eigen::VectorXd y = L.transpose().partialPivLu().solve(e);  // e^T L^{-1}
  Eigen::MatrixXd M = L;
  M.row(nr - 1) += 2.0 * ghost * (2.0 - alpha) * (-2.0 / h) * y.transpose();

  Eigen::EigenSolver<Eigen::MatrixXd> es(-M, false);
  std::vector<double> out;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const auto v = es.eigenvalues()[k];
    if (std::abs(v.imag()) <= 1e-8 * std::max(1.0, std::abs(v.real())) && v.real() > 1e-8)
      out.push_back(v.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<double> fd_stokes_eigs(double alpha, int n, int n_r, int count) {
  if (n_r < 32 || n_r % 2 != 0) throw std::invalid_argument("fd_stokes_eigs: n_r must be even and >= 32");
  if (n < 0 || count < 1) throw std::invalid_argument("fd_stokes_eigs: bad order or count");
  const auto fine = raw_eigs(alpha, n, n_r);
  const auto coarse = raw_eigs(alpha, n, n_r / 2);
  std::vector<double> out;
  for (double v : fine) {
    const auto it = std::lower_bound(coarse.begin(), coarse.end(), v);
    double best = 1e300;
    if (it != coarse.end()) best = std::min(best, std::abs(*it - v));
    if (it != coarse.begin()) best = std::min(best, std::abs(*(it - 1) - v));
    if (best <= 1e-2 * v) out.push_back(v);
    if (static_cast<int>(out.size()) == count) break;
  }
  return out;
}

}  // namespace sdns_oracle
