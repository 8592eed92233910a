#include "sdns/disk_grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sdns {

using std::numbers::pi;

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      // Recompute the derivative at the converged node for the weight.
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

Eigen::VectorXd barycentric_weights(const Eigen::VectorXd& nodes) {
  const Eigen::Index n = nodes.size();
  Eigen::VectorXd log_mag(n), sign(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double lm = 0.0, s = 1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == j) continue;
      const double d = nodes[j] - nodes[k];
      if (d == 0.0) throw std::invalid_argument("barycentric_weights: repeated node");
      lm -= std::log(std::abs(d));
      if (d < 0) s = -s;
    }
    log_mag[j] = lm;
    sign[j] = s;
  }
  const double top = log_mag.maxCoeff();
  Eigen::VectorXd w(n);
  for (Eigen::Index j = 0; j < n; ++j) w[j] = sign[j] * std::exp(log_mag[j] - top);
  return w;
}

Eigen::MatrixXd barycentric_diff_matrix(const Eigen::VectorXd& nodes) {
  const Eigen::Index n = nodes.size();
  const Eigen::VectorXd w = barycentric_weights(nodes);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double diag = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = (w[j] / w[i]) / (nodes[i] - nodes[j]);
      diag -= d(i, j);
    }
    d(i, i) = diag;
  }
  return d;
}

DiskGrid::DiskGrid(int n_r, int n_theta) : n_r_(n_r), n_theta_(n_theta) {
  if (n_r < 2) throw std::invalid_argument("DiskGrid: n_r must be >= 2");
  if (n_theta < 4 || n_theta % 2 != 0)
    throw std::invalid_argument("DiskGrid: n_theta must be even and >= 4");
  n_pad_ = 3 * n_theta / 2;

  Eigen::VectorXd x, w;
  gauss_legendre(n_r, x, w);
  r_ = 0.5 * (x.array() + 1.0);
  r_w_ = (0.25 * w.array() * (x.array() + 1.0)).matrix();  // (1/2) w * r
  theta_.resize(n_theta);
  for (int j = 0; j < n_theta; ++j) theta_[j] = 2.0 * pi * j / n_theta;

  weights_.resize(n_r, n_theta);
  cos_.resize(n_r, n_theta);
  sin_.resize(n_r, n_theta);
  inv_r_.resize(n_r, n_theta);
  x_.resize(n_r, n_theta);
  y_.resize(n_r, n_theta);
  const double dtheta = 2.0 * pi / n_theta;
  for (int i = 0; i < n_r; ++i) {
    for (int j = 0; j < n_theta; ++j) {
      weights_(i, j) = r_w_[i] * dtheta;
      cos_(i, j) = std::cos(theta_[j]);
      sin_(i, j) = std::sin(theta_[j]);
      inv_r_(i, j) = 1.0 / r_[i];
      x_(i, j) = r_[i] * cos_(i, j);
      y_(i, j) = r_[i] * sin_(i, j);
    }
  }

  bary_w_ = barycentric_weights(r_);
  d_r_ = barycentric_diff_matrix(r_);

  to_boundary_.resize(n_r);
  {
    double denom = 0.0;
    for (int i = 0; i < n_r; ++i) {
      to_boundary_[i] = bary_w_[i] / (1.0 - r_[i]);
      denom += to_boundary_[i];
    }
    to_boundary_ /= denom;
  }

  // Fourier differentiation matrix for even N.
  d_theta_ = Eigen::MatrixXd::Zero(n_theta, n_theta);
  for (int i = 0; i < n_theta; ++i) {
    for (int j = 0; j < n_theta; ++j) {
      if (i == j) continue;
      const int k = i - j;
      const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
      d_theta_(i, j) = 0.5 * sgn / std::tan(0.5 * k * dtheta);
    }
  }

  const int kmax = n_theta / 2 - 1;
  up_.resize(n_pad_, n_theta);
  for (int p = 0; p < n_pad_; ++p) {
    const double phi = 2.0 * pi * p / n_pad_;
    for (int j = 0; j < n_theta; ++j) {
      double s = 1.0;
      for (int m = 1; m <= kmax; ++m) s += 2.0 * std::cos(m * (phi - theta_[j]));
      up_(p, j) = s / n_theta;
    }
  }
  down_.resize(n_theta, n_pad_);
  for (int j = 0; j < n_theta; ++j) {
    for (int p = 0; p < n_pad_; ++p) {
      const double phi = 2.0 * pi * p / n_pad_;
      double s = 1.0;
      for (int m = 1; m <= kmax; ++m) s += 2.0 * std::cos(m * (theta_[j] - phi));
      down_(j, p) = s / n_pad_;
    }
  }

  analyze_.resize(n_theta, n_theta);
  synthesize_.resize(n_theta, n_theta);
  for (int c = 0; c < n_theta; ++c) {
    const int m = wavenumber(c);
    const bool is_sin = (c > 0 && c < n_theta - 1 && c % 2 == 0);
    const bool edge = (m == 0 || m == n_theta / 2);
    for (int j = 0; j < n_theta; ++j) {
      const double basis = is_sin ? std::sin(m * theta_[j]) : std::cos(m * theta_[j]);
      synthesize_(j, c) = basis;
      analyze_(c, j) = (edge ? 1.0 : 2.0) * basis / n_theta;
    }
  }

  // Radial collocation for the Dirichlet problem on r nodes plus r = 1,
  // written as r^2 psi'' + r psi' - m^2 psi = r^2 rhs.
  Eigen::VectorXd ext(n_r + 1);
  ext.head(n_r) = r_;
  ext[n_r] = 1.0;
  ext_d_ = barycentric_diff_matrix(ext);
  const Eigen::MatrixXd ext_d2 = ext_d_ * ext_d_;
  for (int m = 0; m <= n_theta / 2; ++m) {
    Eigen::MatrixXd op(n_r, n_r);
    for (int i = 0; i < n_r; ++i) {
      const double ri = r_[i];
      for (int j = 0; j < n_r; ++j) op(i, j) = ri * ri * ext_d2(i, j) + ri * ext_d_(i, j);
      op(i, i) -= static_cast<double>(m) * m;
    }
    poisson_lu_.emplace_back(op);
  }
}

int DiskGrid::wavenumber(int column) const {
  if (column == 0) return 0;
  if (column == n_theta_ - 1) return n_theta_ / 2;
  return (column + 1) / 2;
}

double DiskGrid::integrate(const Array2& f) const {
  return f.cwiseProduct(weights_).sum();
}

double DiskGrid::integrate_boundary(const Eigen::VectorXd& g) const {
  return g.sum() * 2.0 * pi / n_theta_;
}

Array2 DiskGrid::d_r(const Array2& f) const { return d_r_ * f; }

Array2 DiskGrid::d_theta(const Array2& f) const { return f * d_theta_.transpose(); }

Array2 DiskGrid::d_x(const Array2& f) const {
  const Array2 fr = d_r(f);
  const Array2 ft = d_theta(f);
  return (cos_.array() * fr.array() - sin_.array() * inv_r_.array() * ft.array()).matrix();
}

Array2 DiskGrid::d_y(const Array2& f) const {
  const Array2 fr = d_r(f);
  const Array2 ft = d_theta(f);
  return (sin_.array() * fr.array() + cos_.array() * inv_r_.array() * ft.array()).matrix();
}

Array2 DiskGrid::laplacian(const Array2& f) const {
  const Array2 fr = d_r(f);
  const Array2 frr = d_r(fr);
  const Array2 ftt = d_theta(d_theta(f));
  return (frr.array() + inv_r_.array() * fr.array() +
          inv_r_.array().square() * ftt.array())
      .matrix();
}

Eigen::VectorXd DiskGrid::boundary_values(const Array2& f) const {
  return (to_boundary_ * f).transpose();
}

double DiskGrid::interpolate(const Array2& f, double r, double theta) const {
  Eigen::RowVectorXd row(n_r_);
  bool exact = false;
  for (int i = 0; i < n_r_; ++i) {
    if (r == r_[i]) {
      row.setZero();
      row[i] = 1.0;
      exact = true;
      break;
    }
  }
  if (!exact) {
    double denom = 0.0;
    for (int i = 0; i < n_r_; ++i) {
      row[i] = bary_w_[i] / (r - r_[i]);
      denom += row[i];
    }
    row /= denom;
  }
  const Eigen::RowVectorXd ring = row * f;
  const Eigen::RowVectorXd coeffs = ring * analyze_.transpose();
  double value = 0.0;
  for (int c = 0; c < n_theta_; ++c) {
    const int m = wavenumber(c);
    const bool is_sin = (c > 0 && c < n_theta_ - 1 && c % 2 == 0);
    value += coeffs[c] * (is_sin ? std::sin(m * theta) : std::cos(m * theta));
  }
  return value;
}

Array2 DiskGrid::upsample_theta(const Array2& f) const { return f * up_.transpose(); }

Array2 DiskGrid::downsample_theta(const Array2& f) const { return f * down_.transpose(); }

Array2 DiskGrid::dealiased_product(const Array2& a, const Array2& b) const {
  const Array2 pa = upsample_theta(a);
  const Array2 pb = upsample_theta(b);
  return downsample_theta(pa.cwiseProduct(pb));
}

Array2 DiskGrid::fourier_analyze(const Array2& f) const { return f * analyze_.transpose(); }

Array2 DiskGrid::fourier_synthesize(const Array2& coeffs) const {
  return coeffs * synthesize_.transpose();
}

DiskGrid::PoissonSolution DiskGrid::solve_dirichlet_poisson(const Array2& rhs) const {
  if (!matches(rhs)) throw std::invalid_argument("solve_dirichlet_poisson: grid mismatch");
  const Array2 coeffs = fourier_analyze(rhs);
  Array2 psi_hat(n_r_, n_theta_);
  const Eigen::VectorXd r2 = r_.array().square();
  for (int c = 0; c < n_theta_; ++c) {
    const Eigen::VectorXd b = r2.cwiseProduct(coeffs.col(c));
    psi_hat.col(c) = poisson_lu_[wavenumber(c)].solve(b);
  }
  PoissonSolution out;
  out.psi = fourier_synthesize(psi_hat);
  out.psi_r = ext_d_.topLeftCorner(n_r_, n_r_) * out.psi;
  return out;
}

}  // namespace sdns
