#include "sdns/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sdns {

using std::numbers::pi;

Jet Jet::constant(double v) {
  Jet j;
  j.c_[0] = v;
  return j;
}

Jet Jet::x(double x0) {
  Jet j = constant(x0);
  j.coeff(1, 0) = 1.0;
  return j;
}

Jet Jet::y(double y0) {
  Jet j = constant(y0);
  j.coeff(0, 1) = 1.0;
  return j;
}

double Jet::derivative(int a, int b) const {
  if (a < 0 || b < 0 || a + b > kOrder) throw std::out_of_range("Jet::derivative: order");
  double fa = 1.0;
  for (int k = 2; k <= a; ++k) fa *= k;
  double fb = 1.0;
  for (int k = 2; k <= b; ++k) fb *= k;
  return coeff(a, b) * fa * fb;
}

Jet& Jet::operator+=(const Jet& o) {
  for (int k = 0; k < kSize; ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  for (int k = 0; k < kSize; ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Jet operator*(const Jet& p, const Jet& q) {
  Jet out;
  for (int d1 = 0; d1 <= Jet::kOrder; ++d1) {
    for (int b1 = 0; b1 <= d1; ++b1) {
      const double u = p.coeff(d1 - b1, b1);
      if (u == 0.0) continue;
      for (int d2 = 0; d1 + d2 <= Jet::kOrder; ++d2) {
        for (int b2 = 0; b2 <= d2; ++b2) {
          out.coeff(d1 - b1 + d2 - b2, b1 + b2) += u * q.coeff(d2 - b2, b2);
        }
      }
    }
  }
  return out;
}

Jet Jet::compose(const std::array<double, kOrder + 1>& derivs) const {
  Jet delta = *this;
  delta.c_[0] = 0.0;
  Jet power = constant(1.0);
  Jet out = constant(derivs[0]);
  double fact = 1.0;
  for (int k = 1; k <= kOrder; ++k) {
    power = power * delta;
    fact *= k;
    out += (derivs[k] / fact) * power;
  }
  return out;
}

void xi_mode_of(int i, int& m, bool& sine) {
  if (i < 1) throw std::invalid_argument("xi_mode_of: index must be >= 1");
  if (i == 1) {
    m = 0;
    sine = false;
    return;
  }
  m = (i - 2) / 2 + 1;
  sine = (i - 2) % 2 == 1;
}

XiField::XiField(int index, int m, bool sine, double gamma, const BumpParams& bump)
    : index_(index), m_(m), sine_(sine), gamma_(gamma), bump_(bump) {
  if (m < 0) throw std::invalid_argument("XiField: angular order must be >= 0");
  if (m == 0 && sine) throw std::invalid_argument("XiField: no sine field at m = 0");
  if (!(bump.radius > 0.0 && bump.radius < 0.9))
    throw std::invalid_argument("XiField: bump radius must lie in (0, 0.9)");
  if (bump.power < Jet::kOrder + 1)
    throw std::invalid_argument("XiField: bump power must be >= 5");
  if (!(gamma >= 0.0)) throw std::invalid_argument("XiField: gamma must be >= 0");

  // Dense sampling of the support for the sup normalization and W^{3,inf}.
  constexpr int kRadial = 160, kAngular = 256;
  double sup_value = 0.0;
  std::array<double, 4> sup_order{};
  for (int a = 0; a < kRadial; ++a) {
    const double r = bump.radius * (a + 0.5) / kRadial;
    for (int b = 0; b < kAngular; ++b) {
      const double th = 2.0 * pi * b / kAngular;
      const Jet j = raw_stream_jet(r * std::cos(th), r * std::sin(th));
      sup_value = std::max(sup_value, std::hypot(j.derivative(0, 1), j.derivative(1, 0)));
      // Pointwise Frobenius norm of D^d xi_hat, invariant under rotations.
      for (int d = 0; d <= 3; ++d) {
        double sq = 0.0, binom = 1.0;
        for (int q = 0; q <= d; ++q) {
          const double a = j.derivative(d - q, q + 1), b = j.derivative(d - q + 1, q);
          sq += binom * (a * a + b * b);
          binom = binom * (d - q) / (q + 1);
        }
        sup_order[d] = std::max(sup_order[d], std::sqrt(sq));
      }
    }
  }
  scale_ = 1.0 / sup_value;
  for (double s : sup_order) w3inf_ = std::max(w3inf_, s * scale_);
}

Jet XiField::raw_stream_jet(double x, double y) const {
  const Jet X = Jet::x(x);
  const Jet Y = Jet::y(y);
  const double inv_r2 = 1.0 / (bump_.radius * bump_.radius);
  const Jet s = Jet::constant(1.0) - inv_r2 * (X * X + Y * Y);
  const double s0 = s.value();
  if (s0 <= 0.0) return Jet();
  std::array<double, Jet::kOrder + 1> d{};
  double coef = 1.0;
  for (int k = 0; k <= Jet::kOrder; ++k) {
    d[k] = coef * std::pow(s0, bump_.power - k);
    coef *= bump_.power - k;
  }
  const Jet bump = s.compose(d);
  Jet re = Jet::constant(1.0), im;
  for (int k = 0; k < m_; ++k) {
    const Jet nre = re * X - im * Y;
    const Jet nim = re * Y + im * X;
    re = nre;
    im = nim;
  }
  return (sine_ ? im : re) * bump;
}

Jet XiField::stream_jet(double x, double y) const { return scale_ * raw_stream_jet(x, y); }

Eigen::Vector2d XiField::value(double x, double y) const { return derivative(x, y, 0, 0); }

Eigen::Vector2d XiField::derivative(double x, double y, int a, int b) const {
  if (a < 0 || b < 0 || a + b > 3) throw std::out_of_range("XiField::derivative: order");
  const Jet j = stream_jet(x, y);
  return gamma_ * Eigen::Vector2d(-j.derivative(a, b + 1), j.derivative(a + 1, b));
}

FieldWithGradient XiField::sample(const DiskGrid& g) const {
  FieldWithGradient out{VectorField::zeros(g),
                        {g.zeros(), g.zeros(), g.zeros(), g.zeros()}};
  const double s = gamma_;
  for (int i = 0; i < g.n_r(); ++i) {
    if (g.r_nodes()[i] >= bump_.radius) continue;
    for (int k = 0; k < g.n_theta(); ++k) {
      const Jet j = stream_jet(g.x()(i, k), g.y()(i, k));
      out.value.u1(i, k) = -s * j.derivative(0, 1);
      out.value.u2(i, k) = s * j.derivative(1, 0);
      out.grad.d1_f1(i, k) = -s * j.derivative(1, 1);
      out.grad.d2_f1(i, k) = -s * j.derivative(0, 2);
      out.grad.d1_f2(i, k) = s * j.derivative(2, 0);
      out.grad.d2_f2(i, k) = s * j.derivative(1, 1);
    }
  }
  return out;
}

NoiseModel::NoiseModel(std::vector<XiField> fields) : fields_(std::move(fields)) {
  double acc = 0.0;
  for (const auto& f : fields_) {
    acc += f.gamma() * f.gamma() * f.w3inf_norm() * f.w3inf_norm();
    partial_sums_.push_back(acc);
  }
}

NoiseModel build_xi_library(int M, double decay_rate, const BumpParams& bump) {
  if (M < 1) throw std::invalid_argument("build_xi_library: M must be >= 1");
  if (!(decay_rate > 0.0)) throw std::invalid_argument("build_xi_library: decay_rate must be > 0");
  if (!(bump.radius > 0.0 && bump.radius < 0.9))
    throw std::invalid_argument("build_xi_library: bump support must stay inside r < 0.9");
  if (!(bump.amplitude >= 0.0))
    throw std::invalid_argument("build_xi_library: amplitude must be >= 0");
  std::vector<XiField> fields;
  for (int i = 1; i <= M; ++i) {
    int m = 0;
    bool sine = false;
    xi_mode_of(i, m, sine);
    const double gamma = bump.amplitude * std::pow(static_cast<double>(i), -decay_rate - 1.0);
    fields.emplace_back(i, m, sine, gamma, bump);
  }
  return NoiseModel(std::move(fields));
}

namespace {

std::uint32_t mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  return static_cast<std::uint32_t>(p);
}

double unit_open(std::uint32_t a, std::uint32_t b) {
  const double hi = static_cast<double>(a >> 5);
  const double lo = static_cast<double>(b >> 6);
  return (hi * 67108864.0 + lo + 0.5) / 9007199254740992.0;
}

}  // namespace

double quantize_increment(double v) {
  if (!(std::abs(v) < kIncrementRange))
    throw std::range_error("quantize_increment: increment outside the fixed-point range");
  return std::nearbyint(v / kIncrementQuantum) * kIncrementQuantum;
}

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kW0;
      k[1] += kW1;
    }
    std::uint32_t hi0, hi1;
    const std::uint32_t lo0 = mulhilo(kM0, c[0], hi0);
    const std::uint32_t lo1 = mulhilo(kM1, c[2], hi1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

double keyed_normal(std::uint64_t seed, int mode, std::uint64_t step, int level) {
  const auto r = philox4x32(
      {static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32),
       static_cast<std::uint32_t>(mode), static_cast<std::uint32_t>(level)},
      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  const double u1 = unit_open(r[0], r[1]);
  const double u2 = unit_open(r[2], r[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
}

BrownianPath sample_path(std::uint64_t seed, int n_steps, double dt, int M) {
  if (n_steps < 0) throw std::invalid_argument("sample_path: n_steps must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("sample_path: dt must be > 0");
  if (M < 0) throw std::invalid_argument("sample_path: M must be >= 0");
  BrownianPath p;
  p.seed = seed;
  p.dt = dt;
  p.dW.resize(n_steps, M);
  const double sd = std::sqrt(dt);
  for (int s = 0; s < n_steps; ++s)
    for (int i = 0; i < M; ++i) p.dW(s, i) = quantize_increment(sd * keyed_normal(seed, i, s, 0));
  return p;
}

BrownianPath refine(const BrownianPath& path) {
  BrownianPath fine;
  fine.seed = path.seed;
  fine.dt = 0.5 * path.dt;
  fine.level = path.level + 1;
  fine.dW.resize(2 * path.n_steps(), path.modes());
  const double half_sd = 0.5 * std::sqrt(path.dt);
  for (int s = 0; s < path.n_steps(); ++s) {
    for (int i = 0; i < path.modes(); ++i) {
      const double total = path.dW(s, i);
      const double first =
          quantize_increment(0.5 * total + half_sd * keyed_normal(path.seed, i, s, fine.level));
      const double second = total - first;  // exact on the lattice
      fine.dW(2 * s, i) = first;
      fine.dW(2 * s + 1, i) = second;
    }
  }
  return fine;
}

}  // namespace sdns
