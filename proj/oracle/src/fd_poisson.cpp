#include "sdns_oracle/fd.hpp"

#include <cmath>
#include <stdexcept>

namespace sdns_oracle {

namespace {

// Thomas algorithm: a sub-diagonal, b diagonal, c super-diagonal.
Eigen::VectorXd tridiagonal_solve(std::vector<double> a, std::vector<double> b,
                                  std::vector<double> c, Eigen::VectorXd d) {
  const int n = static_cast<int>(b.size());
  for (int i = 1; i < n; ++i) {
    const double m = a[i] / b[i - 1];
    b[i] -= m * c[i - 1];
    d[i] -= m * d[i - 1];
  }
  Eigen::VectorXd x(n);
  x[n - 1] = d[n - 1] / b[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = (d[i] - c[i] * x[i + 1]) / b[i];
  return x;
}

}  // namespace

FdField fd_poisson_dirichlet(const FdField& rhs, const FdGrid& g) {
  if (rhs.rows() != g.n_r || rhs.cols() != g.n_theta)
    throw std::invalid_argument("fd_poisson_dirichlet: field does not match grid");
  const int nr = g.n_r, nt = g.n_theta;
  FdField psi = FdField::Zero(nr, nt);
  const double h = g.h_r;
  for (int m = 0; m <= nt / 2; ++m) {
    const double lam = (2.0 - 2.0 * std::cos(m * g.h_theta)) / (g.h_theta * g.h_theta);
    std::vector<double> a(nr), b(nr), c(nr);
    for (int i = 0; i < nr; ++i) {
      const double r = g.r(i);
      const double r_in = (i == 0) ? 0.0 : r - 0.5 * h;
      const double r_out = r + 0.5 * h;
      a[i] = r_in / (r * h * h);
      c[i] = r_out / (r * h * h);
      b[i] = -(r_in + r_out) / (r * h * h) - lam / (r * r);
    }
    // Ghost node outside r = 1 set to -psi so the interpolant vanishes there.
    b[nr - 1] -= c[nr - 1];
    c[nr - 1] = 0.0;

    const bool edge = (m == 0 || m == nt / 2);
    for (int parity = 0; parity < (edge ? 1 : 2); ++parity) {
      Eigen::VectorXd coef(nr);
      for (int i = 0; i < nr; ++i) {
        double s = 0.0;
        for (int j = 0; j < nt; ++j) {
          const double t = m * g.theta(j);
          s += rhs(i, j) * (parity == 0 ? std::cos(t) : std::sin(t));
        }
        coef[i] = s * (edge ? 1.0 : 2.0) / nt;
      }
      const Eigen::VectorXd sol = tridiagonal_solve(a, b, c, coef);
      for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nt; ++j) {
          const double t = m * g.theta(j);
          psi(i, j) += sol[i] * (parity == 0 ? std::cos(t) : std::sin(t));
        }
    }
  }
  return psi;
}

FdHelmholtz fd_helmholtz_decompose(const FdField& f1, const FdField& f2, const FdGrid& g) {
  const FdGradient d1 = fd_derivatives(f1, g);
  const FdGradient d2 = fd_derivatives(f2, g);
  const FdField vort = d2.dx - d1.dy;
  const FdField psi = fd_poisson_dirichlet(vort, g);
  const FdGradient dp = fd_derivatives(psi, g);
  FdHelmholtz out;
  out.div_free_1 = -dp.dy;
  out.div_free_2 = dp.dx;
  out.gradient_1 = f1 - out.div_free_1;
  out.gradient_2 = f2 - out.div_free_2;
  return out;
}

FdHelmholtz fd_helmholtz_richardson(const PlaneFunction& f1, const PlaneFunction& f2,
                                    const FdGrid& g) {
  const FdGrid fine = g.refined(3);
  const FdHelmholtz c = fd_helmholtz_decompose(fd_sample(g, f1), fd_sample(g, f2), g);
  const FdHelmholtz f = fd_helmholtz_decompose(fd_sample(fine, f1), fd_sample(fine, f2), fine);
  auto mix = [&](const FdField& fc, const FdField& ff) {
    return FdField((9.0 * fd_restrict(ff, g, 3) - fc) / 8.0);
  };
  return {mix(c.div_free_1, f.div_free_1), mix(c.div_free_2, f.div_free_2),
          mix(c.gradient_1, f.gradient_1), mix(c.gradient_2, f.gradient_2)};
}

}  // namespace sdns_oracle
