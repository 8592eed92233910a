#include "sdns_oracle/fd.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sdns_oracle {

FdGrid::FdGrid(int n_r_, int n_theta_) : n_r(n_r_), n_theta(n_theta_) {
  if (n_r < 16 || n_theta < 16) throw std::invalid_argument("FdGrid: need at least 16 nodes per direction");
  if (n_theta % 2 != 0) throw std::invalid_argument("FdGrid: n_theta must be even");
  h_r = 1.0 / n_r;
  h_theta = 2.0 * std::numbers::pi / n_theta;
}

FdField fd_sample(const FdGrid& g, const PlaneFunction& f) {
  FdField out(g.n_r, g.n_theta);
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_theta; ++j)
      out(i, j) = f(g.r(i) * std::cos(g.theta(j)), g.r(i) * std::sin(g.theta(j)));
  return out;
}

FdField fd_restrict(const FdField& fine, const FdGrid& coarse, int factor) {
  if (factor % 2 == 0) throw std::invalid_argument("fd_restrict: factor must be odd");
  FdField out(coarse.n_r, coarse.n_theta);
  for (int i = 0; i < coarse.n_r; ++i)
    for (int j = 0; j < coarse.n_theta; ++j) out(i, j) = fine(factor * i + factor / 2, factor * j);
  return out;
}

std::vector<double> fd_weights(const std::vector<double>& x, int m) {
  // Fornberg, "Generation of finite difference formulas on arbitrarily
  // spaced grids", Math. Comp. 51 (1988), evaluated at z = 0.
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = x[0];
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i];
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

namespace {

// Value at radial index i (possibly negative, reflected through the origin).
double radial_value(const FdField& f, const FdGrid& g, int i, int j) {
  if (i >= 0) return f(i, j);
  return f(-1 - i, (j + g.n_theta / 2) % g.n_theta);
}

}  // namespace

FdGradient fd_derivatives(const FdField& f, const FdGrid& g) {
  if (f.rows() != g.n_r || f.cols() != g.n_theta)
    throw std::invalid_argument("fd_derivatives: field does not match grid");
  static const std::vector<double> central = fd_weights({-2, -1, 0, 1, 2}, 1);
  static const std::vector<double> rim1 = fd_weights({-3, -2, -1, 0, 1}, 1);
  static const std::vector<double> rim0 = fd_weights({-4, -3, -2, -1, 0}, 1);
  FdGradient d{FdField(g.n_r, g.n_theta), FdField(g.n_r, g.n_theta)};
  for (int i = 0; i < g.n_r; ++i) {
    const std::vector<double>* w = &central;
    int lo = -2;
    if (i == g.n_r - 2) {
      w = &rim1;
      lo = -3;
    } else if (i == g.n_r - 1) {
      w = &rim0;
      lo = -4;
    }
    for (int j = 0; j < g.n_theta; ++j) {
      double fr = 0.0;
      for (int k = 0; k < 5; ++k) fr += (*w)[k] * radial_value(f, g, i + lo + k, j);
      fr /= g.h_r;
      double ft = 0.0;
      for (int k = 0; k < 5; ++k) ft += central[k] * f(i, (j + k - 2 + g.n_theta) % g.n_theta);
      ft /= g.h_theta;
      const double c = std::cos(g.theta(j)), s = std::sin(g.theta(j)), r = g.r(i);
      d.dx(i, j) = c * fr - s * ft / r;
      d.dy(i, j) = s * fr + c * ft / r;
    }
  }
  return d;
}

FdGradient fd_derivatives_richardson(const PlaneFunction& f, const FdGrid& g) {
  const FdGrid fine = g.refined(3);
  const FdGradient dc = fd_derivatives(fd_sample(g, f), g);
  const FdGradient df = fd_derivatives(fd_sample(fine, f), fine);
  FdGradient out;
  out.dx = (81.0 * fd_restrict(df.dx, g, 3) - dc.dx) / 80.0;
  out.dy = (81.0 * fd_restrict(df.dy, g, 3) - dc.dy) / 80.0;
  return out;
}

FdField fd_divergence(const PlaneFunction& f1, const PlaneFunction& f2, const FdGrid& g) {
  return fd_derivatives_richardson(f1, g).dx + fd_derivatives_richardson(f2, g).dy;
}

double fd_integrate(const FdField& f, const FdGrid& g) {
  double s = 0.0;
  for (int i = 0; i < g.n_r; ++i) s += g.r(i) * f.row(i).sum();
  return s * g.h_r * g.h_theta;
}

}  // namespace sdns_oracle
