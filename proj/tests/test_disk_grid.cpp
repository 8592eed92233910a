#include "doctest.h"

#include "sdns/disk_grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace sdns;

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
Array2 sample(const DiskGrid& g, F f) {
  Array2 out(g.n_r(), g.n_theta());
  for (int i = 0; i < g.n_r(); ++i)
    for (int j = 0; j < g.n_theta(); ++j) out(i, j) = f(g.x()(i, j), g.y()(i, j));
  return out;
}

double max_abs(const Array2& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("Gauss-Legendre rule") {
  Eigen::VectorXd x, w;
  gauss_legendre(12, x, w);
  CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-14));
  for (int k = 0; k < 12; ++k) CHECK(x[k] == doctest::Approx(-x[11 - k]).epsilon(1e-14));
  for (int k = 1; k < 12; ++k) CHECK(x[k] > x[k - 1]);
  // Exact through degree 23.
  CHECK(w.dot(x.array().pow(22).matrix()) == doctest::Approx(2.0 / 23.0).epsilon(1e-13));
  CHECK_THROWS_AS(gauss_legendre(0, x, w), std::invalid_argument);
}

TEST_CASE("barycentric differentiation is exact on polynomials") {
  Eigen::VectorXd x, w;
  gauss_legendre(9, x, w);
  const Eigen::MatrixXd D = barycentric_diff_matrix(x);
  const Eigen::VectorXd p = x.array().pow(5) - 2.0 * x.array().square();
  const Eigen::VectorXd dp = 5.0 * x.array().pow(4) - 4.0 * x.array();
  CHECK((D * p - dp).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::VectorXd rep(2);
  rep << 0.5, 0.5;
  CHECK_THROWS_AS(barycentric_weights(rep), std::invalid_argument);
}

TEST_CASE("grid construction") {
  CHECK_THROWS_AS(DiskGrid(1, 16), std::invalid_argument);
  CHECK_THROWS_AS(DiskGrid(8, 15), std::invalid_argument);
  CHECK_THROWS_AS(DiskGrid(8, 2), std::invalid_argument);
  const DiskGrid g(10, 16);
  CHECK(g.r_nodes().minCoeff() > 0.0);
  CHECK(g.r_nodes().maxCoeff() < 1.0);
  CHECK(g.padded_n_theta() >= 24);
}

TEST_CASE("area quadrature") {
  const DiskGrid g(16, 32);
  CHECK(g.integrate(sample(g, [](double, double) { return 1.0; })) ==
        doctest::Approx(kPi).epsilon(1e-14));
  CHECK(g.integrate(sample(g, [](double x, double) { return x * x; })) ==
        doctest::Approx(kPi / 4).epsilon(1e-14));
  CHECK(g.integrate(sample(g, [](double x, double y) { return x * x * y * y; })) ==
        doctest::Approx(kPi / 24).epsilon(1e-13));
  CHECK(std::abs(g.integrate(sample(g, [](double x, double y) { return x * y * y; }))) < 1e-15);
  Eigen::VectorXd one = Eigen::VectorXd::Ones(g.n_theta());
  CHECK(g.integrate_boundary(one) == doctest::Approx(2 * kPi).epsilon(1e-14));
}

TEST_CASE("spectral derivatives of smooth functions") {
  const DiskGrid g(24, 48);
  const Array2 f = sample(g, [](double x, double y) { return std::exp(x) * std::sin(2.0 * y); });
  const Array2 fx = sample(g, [](double x, double y) { return std::exp(x) * std::sin(2.0 * y); });
  const Array2 fy = sample(g, [](double x, double y) { return 2.0 * std::exp(x) * std::cos(2.0 * y); });
  CHECK(max_abs(g.d_x(f) - fx) < 1e-10);
  CHECK(max_abs(g.d_y(f) - fy) < 1e-10);
  CHECK(max_abs(g.laplacian(f) + 3.0 * f) < 1e-8);

  const Array2 c = sample(g, [](double, double) { return 2.5; });
  CHECK(max_abs(g.d_x(c)) < 1e-11);
  CHECK(max_abs(g.d_theta(c)) < 1e-11);
}

TEST_CASE("Bessel Laplacian eigenfunction") {
  const DiskGrid g(32, 16);
  const double s = 3.8317059702075125;
  const Array2 f = sample(g, [s](double x, double y) {
    return std::cyl_bessel_j(1.0, s * std::hypot(x, y)) * y / std::hypot(x, y);
  });
  CHECK(max_abs(g.laplacian(f) + s * s * f) < 1e-8);
}

TEST_CASE("boundary extrapolation and interpolation") {
  const DiskGrid g(16, 32);
  const Array2 f = sample(g, [](double x, double y) { return x * x * x + 0.5 * y; });
  const Eigen::VectorXd b = g.boundary_values(f);
  for (int j = 0; j < g.n_theta(); ++j) {
    const double t = g.theta_nodes()[j];
    CHECK(b[j] == doctest::Approx(std::pow(std::cos(t), 3) + 0.5 * std::sin(t)).epsilon(1e-12));
  }
  CHECK(g.interpolate(f, 0.3, 1.1) ==
        doctest::Approx(std::pow(0.3 * std::cos(1.1), 3) + 0.15 * std::sin(1.1)).epsilon(1e-12));
  CHECK(g.interpolate(f, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Dirichlet Poisson solve") {
  const DiskGrid g(16, 32);
  const auto sol = g.solve_dirichlet_poisson(sample(g, [](double, double) { return 4.0; }));
  CHECK(max_abs(sol.psi - sample(g, [](double x, double y) { return x * x + y * y - 1.0; })) < 1e-12);
  CHECK(max_abs(sol.psi_r - sample(g, [](double x, double y) { return 2.0 * std::hypot(x, y); })) < 1e-11);
  CHECK(max_abs(g.solve_dirichlet_poisson(g.zeros()).psi) == 0.0);
  CHECK_THROWS_AS(g.solve_dirichlet_poisson(Array2::Zero(15, 32)), std::invalid_argument);

  // psi = (r^2 - 1) r^2 cos(2 theta); r^2 cos(2 theta) is harmonic.
  const auto s2 = g.solve_dirichlet_poisson(sample(g, [](double x, double y) { return 12.0 * (x * x - y * y); }));
  CHECK(max_abs(s2.psi - sample(g, [](double x, double y) { return (x * x + y * y - 1.0) * (x * x - y * y); })) < 1e-11);
}

TEST_CASE("Fourier transforms and padding round trip") {
  const DiskGrid g(8, 16);
  const Array2 f = sample(g, [](double x, double y) { return std::cos(x + y) + x * y * y; });
  CHECK(max_abs(g.fourier_synthesize(g.fourier_analyze(f)) - f) < 1e-13);
  CHECK(g.wavenumber(0) == 0);
  CHECK(g.wavenumber(1) == 1);
  CHECK(g.wavenumber(2) == 1);
  CHECK(g.wavenumber(3) == 2);

  const Array2 band = sample(g, [](double x, double y) { return x * x - y + x * y * y; });
  CHECK(max_abs(g.downsample_theta(g.upsample_theta(band)) - band) < 1e-13);
  CHECK(g.upsample_theta(band).cols() == g.padded_n_theta());
  // Product of two degree-3 trig polynomials is exact after padding.
  const Array2 prod = g.dealiased_product(band, band);
  CHECK(max_abs(prod - band.cwiseProduct(band)) < 1e-12);
}
