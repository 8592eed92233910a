#pragma once

#include "sdns/disk_grid.hpp"
#include "sdns/fields.hpp"
#include "sdns/operators.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

namespace sdns {

/// Bivariate Taylor polynomial truncated at total degree 4. Coefficient
/// (a, b) holds d^a_x d^b_y f / (a! b!) at the expansion point.
class Jet {
 public:
  static constexpr int kOrder = 4;

  Jet() { c_.fill(0.0); }
  static Jet constant(double v);
  /// The coordinate functions x and y expanded at (x0, y0).
  static Jet x(double x0);
  static Jet y(double y0);

  double coeff(int a, int b) const { return c_[index(a, b)]; }
  double& coeff(int a, int b) { return c_[index(a, b)]; }
  /// Partial derivative d^a_x d^b_y at the expansion point.
  double derivative(int a, int b) const;
  double value() const { return c_[0]; }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b);

  /// f(jet) given f and its first kOrder derivatives at value().
  Jet compose(const std::array<double, kOrder + 1>& derivs) const;

 private:
  static constexpr int kSize = (kOrder + 1) * (kOrder + 2) / 2;
  static int index(int a, int b) {
    const int d = a + b;
    return d * (d + 1) / 2 + b;
  }
  std::array<double, kSize> c_;
};

struct BumpParams {
  double radius = 0.85;   // support radius, must be < 0.9
  int power = 16;         // q in (1 - r^2/R^2)^q
  double amplitude = 1.0; // overall factor on every gamma_i
};

/// One correlation field xi = gamma grad_perp(chi) with
/// chi = P(x, y) (1 - r^2/R^2)_+^q and P = Re or Im of (x + iy)^m, scaled so
/// that sup |grad_perp chi| = 1. Divergence-free by construction and
/// identically zero for r >= R.
class XiField {
 public:
  XiField(int index, int m, bool sine, double gamma, const BumpParams& bump);

  int index() const { return index_; }
  int angular_order() const { return m_; }
  bool sine() const { return sine_; }
  double gamma() const { return gamma_; }
  double support_radius() const { return bump_.radius; }

  /// Jet of the normalized stream function chi at (x, y).
  Jet stream_jet(double x, double y) const;
  /// gamma * xi_hat at a point.
  Eigen::Vector2d value(double x, double y) const;
  /// d^a_x d^b_y of gamma * xi_hat, a + b <= 3.
  Eigen::Vector2d derivative(double x, double y, int a, int b) const;

  /// gamma * xi_hat on the grid with its analytic Jacobian.
  FieldWithGradient sample(const DiskGrid& g) const;

  /// max over orders d <= 3 of sup |D^d xi_hat| (Frobenius norm of the derivative
  /// tensor), by dense sampling.
  double w3inf_norm() const { return w3inf_; }

 private:
  Jet raw_stream_jet(double x, double y) const;

  int index_;
  int m_;
  bool sine_;
  double gamma_;
  BumpParams bump_;
  double scale_ = 1.0;
  double w3inf_ = 0.0;
};

/// The truncated family xi_1..xi_M.
class NoiseModel {
 public:
  NoiseModel() = default;
  explicit NoiseModel(std::vector<XiField> fields);

  int size() const { return static_cast<int>(fields_.size()); }
  const XiField& field(int i) const { return fields_.at(i); }
  const std::vector<XiField>& fields() const { return fields_; }

  /// Partial sums of gamma_i^2 ||xi_hat_i||^2_{W^{3,inf}}.
  const std::vector<double>& summability_partial_sums() const { return partial_sums_; }
  double summability() const { return partial_sums_.empty() ? 0.0 : partial_sums_.back(); }

 private:
  std::vector<XiField> fields_;
  std::vector<double> partial_sums_;
};

/// Angular order and parity of the i-th library field (1-based): i = 1 is the
/// axisymmetric swirl, then m = 1 cos, m = 1 sin, m = 2 cos, ...
void xi_mode_of(int i, int& m, bool& sine);

/// gamma_i = amplitude * i^(-decay_rate - 1). Throws std::invalid_argument
/// for M < 1, decay_rate <= 0 or a support reaching r = 0.9.
NoiseModel build_xi_library(int M, double decay_rate, const BumpParams& bump);

/// Philox4x32-10 counter-based generator.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Standard normal deviate keyed by (seed, mode, step, level).
double keyed_normal(std::uint64_t seed, int mode, std::uint64_t step, int level);

/// Increments live on the lattice kIncrementQuantum * Z with magnitude below
/// kIncrementRange, so the sum of any two is exact in double precision and
/// bridge refinement telescopes bit-for-bit.
constexpr double kIncrementQuantum = 0x1p-44;
constexpr double kIncrementRange = 0x1p8;
double quantize_increment(double v);

/// Increments of M independent Brownian motions on a uniform time grid.
struct BrownianPath {
  std::uint64_t seed = 0;
  double dt = 0.0;
  int level = 0;
  /// (n_steps x M) increments.
  Eigen::MatrixXd dW;

  int n_steps() const { return static_cast<int>(dW.rows()); }
  int modes() const { return static_cast<int>(dW.cols()); }
};

BrownianPath sample_path(std::uint64_t seed, int n_steps, double dt, int M);

/// Brownian-bridge midpoint insertion: halves dt, and each consecutive pair of
/// fine increments sums exactly to the parent increment.
BrownianPath refine(const BrownianPath& path);

}  // namespace sdns
