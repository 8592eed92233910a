#include "sdns/disk_basis.hpp"

#include "sdns/bessel.hpp"
#include "sdns/format.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace sdns {

using std::numbers::pi;

namespace {

constexpr double kScanStep = 0.05;
constexpr double kScanStart = 1e-3;

// F(sigma) = sigma * h(sigma) with h = sigma J_n - (2 - alpha) J_{n+1}, using
// sigma J_n' - n J_n = -sigma J_{n+1}.
double reduced_characteristic(int n, double alpha, double sigma) {
  const auto j = bessel_j_orders(n + 1, sigma);
  return sigma * j[n] - (2.0 - alpha) * j[n + 1];
}

// Leading coefficient of h(sigma) / sigma^(n+1) at sigma = 0, up to 1/(2^n n!).
double small_sigma_sign(int n, double alpha) {
  return 1.0 - (2.0 - alpha) / (2.0 * (n + 1));
}

int sign_of(double v, double fallback) {
  if (v > 0) return 1;
  if (v < 0) return -1;
  return fallback > 0 ? 1 : (fallback < 0 ? -1 : 0);
}

double bisect(int n, double alpha, double a, double b) {
  double fa = reduced_characteristic(n, alpha, a);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = reduced_characteristic(n, alpha, mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (fa > 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

void check_alpha(double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.0)
    throw std::invalid_argument("slip coefficient alpha must be finite and >= 0");
}

struct Candidate {
  double sigma;
  int n;
  Parity parity;
  int k;
};

bool candidate_less(const Candidate& a, const Candidate& b) {
  const double la = a.sigma * a.sigma, lb = b.sigma * b.sigma;
  if (la != lb) return la < lb;
  return std::make_tuple(a.n, static_cast<int>(a.parity), a.k) <
         std::make_tuple(b.n, static_cast<int>(b.parity), b.k);
}

Mode make_mode(int n, Parity parity, int k, double sigma) {
  Mode m;
  m.n = n;
  m.parity = parity;
  m.k = k;
  m.sigma = sigma;
  m.lambda = sigma * sigma;
  const auto j = bessel_j_orders(n + 1, sigma);
  const double jn = j[n];
  const double jn1 = j[n + 1];
  const double jnp = (n == 0) ? -j[1] : 0.5 * (j[n - 1] - jn1);
  m.harmonic_coeff = -jn;
  // int_0^1 r J_n(sigma r)^2 dr - J_n(sigma) int_0^1 r^{n+1} J_n(sigma r) dr
  const double radial =
      0.5 * (jnp * jnp + (1.0 - static_cast<double>(n) * n / (sigma * sigma)) * jn * jn) -
      jn * jn1 / sigma;
  const double angular = (n == 0) ? 2.0 * pi : pi;
  m.norm_const = 1.0 / std::sqrt(sigma * sigma * radial * angular);
  return m;
}

struct ModePointValues {
  double u1, u2, curl;
};

ModePointValues mode_at(const Mode& m, double r, double theta) {
  const auto j = bessel_j_orders(m.n + 1, m.sigma * r);
  const double jn = j[m.n];
  const double jnp = (m.n == 0) ? -j[1] : 0.5 * (j[m.n - 1] - j[m.n + 1]);
  const double rn = std::pow(r, m.n);
  const double radial = jn + m.harmonic_coeff * rn;
  const double radial_r =
      m.sigma * jnp + (m.n == 0 ? 0.0 : m.harmonic_coeff * m.n * std::pow(r, m.n - 1));
  double t, tp;
  if (m.parity == Parity::Cos) {
    t = std::cos(m.n * theta);
    tp = -m.n * std::sin(m.n * theta);
  } else {
    t = std::sin(m.n * theta);
    tp = m.n * std::cos(m.n * theta);
  }
  const double psi_r = m.norm_const * radial_r * t;
  const double psi_t_over_r = (m.n == 0) ? 0.0 : m.norm_const * radial / r * tp;
  const double c = std::cos(theta), s = std::sin(theta);
  const double psi_x = c * psi_r - s * psi_t_over_r;
  const double psi_y = s * psi_r + c * psi_t_over_r;
  return {-psi_y, psi_x, -m.sigma * m.sigma * m.norm_const * jn * t};
}

}  // namespace

const char* to_string(Parity p) { return p == Parity::Cos ? "cos" : "sin"; }

double slip_characteristic(int n, double alpha, double sigma) {
  return sigma * reduced_characteristic(n, alpha, sigma);
}

std::vector<double> sigmas_below(int n, double alpha, double ceiling) {
  check_alpha(alpha);
  if (n < 0) throw std::invalid_argument("angular order must be >= 0");
  std::vector<double> roots;
  const double lead = small_sigma_sign(n, alpha);
  double a = kScanStart;
  int sa = sign_of(reduced_characteristic(n, alpha, a), lead);
  if (lead != 0.0 && sa != sign_of(lead, lead)) {
    // A root below the scan start: bisect on the small-argument side.
    roots.push_back(bisect(n, alpha, 1e-12, a));
  }
  while (a < ceiling) {
    const double b = std::min(a + kScanStep, ceiling);
    const double fb = reduced_characteristic(n, alpha, b);
    const int sb = sign_of(fb, sa);
    if (fb == 0.0) {
      roots.push_back(b);
    } else if (sb != sa && sa != 0) {
      roots.push_back(bisect(n, alpha, a, b));
    }
    a = b;
    sa = sb;
  }
  return roots;
}

SigmaRoots find_sigmas(int n, double alpha, int count, double ceiling) {
  check_alpha(alpha);
  if (count < 1) throw std::invalid_argument("find_sigmas: count must be >= 1");
  SigmaRoots out;
  out.degenerate_zero = std::abs(small_sigma_sign(n, alpha)) < 1e-12;
  // Roots are spaced by roughly pi, so this ceiling guess is usually enough.
  double top = std::min(ceiling, n + 2.0 + (count + 1) * pi + 2.0 * std::cbrt(n + 1.0));
  for (;;) {
    auto roots = sigmas_below(n, alpha, top);
    if (static_cast<int>(roots.size()) >= count) {
      roots.resize(count);
      out.sigmas = std::move(roots);
      return out;
    }
    if (top >= ceiling) break;
    top = std::min(ceiling, top * 1.5);
  }
  std::ostringstream msg;
  msg << "find_sigmas: fewer than " << count << " roots below ceiling " << ceiling
      << " for n=" << n << ", alpha=" << alpha;
  throw std::runtime_error(msg.str());
}

BasisSet BasisSet::build(double alpha, int n_modes, std::shared_ptr<const DiskGrid> grid) {
  check_alpha(alpha);
  if (n_modes < 1) throw std::invalid_argument("build_basis: n_modes must be >= 1");
  double ceiling = 4.0 + 2.0 * std::sqrt(static_cast<double>(n_modes)) + 0.5 * n_modes;
  for (;;) {
    std::vector<Candidate> cands;
    for (int n = 0; n <= static_cast<int>(ceiling) + 2; ++n) {
      const auto roots = sigmas_below(n, alpha, ceiling);
      if (roots.empty() && n > 2) break;
      for (std::size_t k = 0; k < roots.size(); ++k) {
        cands.push_back({roots[k], n, Parity::Cos, static_cast<int>(k) + 1});
        if (n > 0) cands.push_back({roots[k], n, Parity::Sin, static_cast<int>(k) + 1});
      }
    }
    if (static_cast<int>(cands.size()) > n_modes) {
      std::sort(cands.begin(), cands.end(), candidate_less);
      std::vector<ModeKey> keys;
      for (int i = 0; i < n_modes; ++i) keys.push_back({cands[i].n, cands[i].parity, cands[i].k});
      return from_modes(alpha, keys, std::move(grid));
    }
    ceiling *= 1.5;
  }
}

BasisSet BasisSet::from_modes(double alpha, const std::vector<ModeKey>& keys,
                              std::shared_ptr<const DiskGrid> grid) {
  check_alpha(alpha);
  if (!grid) throw std::invalid_argument("build_basis: null grid");
  if (keys.empty()) throw std::invalid_argument("build_basis: no modes requested");
  std::set<std::tuple<int, int, int>> seen;
  int max_n = 0, max_k = 1;
  for (const auto& key : keys) {
    if (key.n < 0 || key.k < 1) throw std::invalid_argument("build_basis: invalid mode index");
    if (key.n == 0 && key.parity == Parity::Sin)
      throw std::invalid_argument("build_basis: sine parity requires n >= 1");
    if (!seen.insert({key.n, static_cast<int>(key.parity), key.k}).second) {
      std::ostringstream msg;
      msg << "build_basis: duplicate mode (n=" << key.n << ", " << to_string(key.parity)
          << ", k=" << key.k << ")";
      throw std::invalid_argument(msg.str());
    }
    max_n = std::max(max_n, key.n);
    max_k = std::max(max_k, key.k);
  }
  if (grid->n_theta() < 2 * max_n + 2 || grid->n_r() < 2 * max_k) {
    std::ostringstream msg;
    msg << "build_basis: grid " << grid->n_r() << "x" << grid->n_theta()
        << " too coarse for angular order " << max_n << " and radial index " << max_k;
    throw std::invalid_argument(msg.str());
  }

  BasisSet b;
  b.alpha_ = alpha;
  b.grid_ = std::move(grid);
  if (alpha < 1.0) {
    b.warnings_.push_back("alpha < kappa = 1: strong solutions are only guaranteed for alpha >= kappa");
  }
  std::vector<Candidate> cands;
  for (const auto& key : keys) {
    const auto roots = find_sigmas(key.n, alpha, key.k);
    cands.push_back({roots.sigmas.back(), key.n, key.parity, key.k});
  }
  std::stable_sort(cands.begin(), cands.end(), candidate_less);
  for (const auto& c : cands) b.modes_.push_back(make_mode(c.n, c.parity, c.k, c.sigma));
  b.sample();
  return b;
}

void BasisSet::sample() {
  const DiskGrid& g = *grid_;
  const int nr = g.n_r(), nt = g.n_theta();
  const Eigen::Index p = static_cast<Eigen::Index>(nr) * nt;
  const int n = size();
  samples_.resize(2 * p, n);
  curls_.resize(p, n);
  for (int k = 0; k < n; ++k) {
    const Mode& m = modes_[k];
    for (int i = 0; i < nr; ++i) {
      const double r = g.r_nodes()[i];
      const auto j = bessel_j_orders(m.n + 1, m.sigma * r);
      const double jn = j[m.n];
      const double jnp = (m.n == 0) ? -j[1] : 0.5 * (j[m.n - 1] - j[m.n + 1]);
      const double radial = jn + m.harmonic_coeff * std::pow(r, m.n);
      const double radial_r =
          m.sigma * jnp + (m.n == 0 ? 0.0 : m.harmonic_coeff * m.n * std::pow(r, m.n - 1));
      for (int jt = 0; jt < nt; ++jt) {
        const double th = g.theta_nodes()[jt];
        double t, tp;
        if (m.parity == Parity::Cos) {
          t = std::cos(m.n * th);
          tp = -m.n * std::sin(m.n * th);
        } else {
          t = std::sin(m.n * th);
          tp = m.n * std::cos(m.n * th);
        }
        const double psi_r = m.norm_const * radial_r * t;
        const double psi_t_over_r = (m.n == 0) ? 0.0 : m.norm_const * radial / r * tp;
        const double c = g.cos_theta()(i, jt), s = g.sin_theta()(i, jt);
        const Eigen::Index idx = static_cast<Eigen::Index>(i) * nt + jt;
        samples_(idx, k) = -(s * psi_r + c * psi_t_over_r);
        samples_(p + idx, k) = c * psi_r - s * psi_t_over_r;
        curls_(idx, k) = -m.sigma * m.sigma * m.norm_const * jn * t;
      }
    }
  }
  Eigen::VectorXd w(2 * p);
  const Eigen::Map<const Eigen::VectorXd> wflat(g.weights().data(), p);
  w.head(p) = wflat;
  w.tail(p) = wflat;
  weighted_ = w.asDiagonal() * samples_;

  for (int k = 0; k < n; ++k) {
    const double self = samples_.col(k).dot(weighted_.col(k));
    if (std::abs(self - 1.0) > 1e-6) {
      std::ostringstream msg;
      msg << "build_basis: grid too coarse, mode " << k << " (n=" << modes_[k].n
          << ", k=" << modes_[k].k << ") has quadrature norm^2 " << self;
      throw std::runtime_error(msg.str());
    }
  }

  // Gradient Gram matrix from grid derivatives of the cached samples.
  Eigen::MatrixXd grads(4 * p, n);
  Eigen::MatrixXd wgrads(4 * p, n);
  Eigen::MatrixXd traces(2 * nt, n);
  for (int k = 0; k < n; ++k) {
    const VectorField a = mode_field(k);
    const Array2 parts[4] = {g.d_x(a.u1), g.d_y(a.u1), g.d_x(a.u2), g.d_y(a.u2)};
    for (int q = 0; q < 4; ++q) {
      grads.col(k).segment(q * p, p) = Eigen::Map<const Eigen::VectorXd>(parts[q].data(), p);
      wgrads.col(k).segment(q * p, p) = grads.col(k).segment(q * p, p).cwiseProduct(wflat);
    }
    traces.col(k).head(nt) = g.boundary_values(a.u1);
    traces.col(k).tail(nt) = g.boundary_values(a.u2);
  }
  gram_h1_ = grads.transpose() * wgrads;
  gram_boundary_ = traces.transpose() * traces * (2.0 * pi / nt);
}

Eigen::VectorXd BasisSet::eigenvalues() const {
  Eigen::VectorXd lam(size());
  for (int k = 0; k < size(); ++k) lam[k] = modes_[k].lambda;
  return lam;
}

VectorField BasisSet::mode_field(int k) const {
  if (k < 0 || k >= size()) throw std::out_of_range("mode_field: index out of range");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(size());
  e[k] = 1.0;
  return synthesize(e);
}

ScalarField BasisSet::mode_curl(int k) const {
  if (k < 0 || k >= size()) throw std::out_of_range("mode_curl: index out of range");
  const DiskGrid& g = *grid_;
  ScalarField w{g.zeros()};
  Eigen::Map<Eigen::VectorXd>(w.v.data(), w.v.size()) = curls_.col(k);
  return w;
}

Eigen::VectorXd BasisSet::analyze(const VectorField& f) const {
  require_on_grid(*grid_, f, "analyze");
  const Eigen::Index p = f.u1.size();
  Eigen::VectorXd out = weighted_.topRows(p).transpose() *
                        Eigen::Map<const Eigen::VectorXd>(f.u1.data(), p);
  out += weighted_.bottomRows(p).transpose() * Eigen::Map<const Eigen::VectorXd>(f.u2.data(), p);
  return out;
}

VectorField BasisSet::synthesize(const Eigen::VectorXd& c) const {
  if (c.size() > size()) throw std::invalid_argument("synthesize: more coefficients than modes");
  const DiskGrid& g = *grid_;
  VectorField f = VectorField::zeros(g);
  const Eigen::Index p = f.u1.size();
  const auto cols = samples_.leftCols(c.size());
  Eigen::Map<Eigen::VectorXd>(f.u1.data(), p) = cols.topRows(p) * c;
  Eigen::Map<Eigen::VectorXd>(f.u2.data(), p) = cols.bottomRows(p) * c;
  return f;
}

Eigen::Vector2d BasisSet::evaluate(const Eigen::VectorXd& c, double r, double theta) const {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    if (c[k] == 0.0) continue;
    const auto pv = mode_at(modes_.at(k), r, theta);
    v[0] += c[k] * pv.u1;
    v[1] += c[k] * pv.u2;
  }
  return v;
}

double BasisSet::evaluate_curl(const Eigen::VectorXd& c, double r, double theta) const {
  double w = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    if (c[k] != 0.0) w += c[k] * mode_at(modes_.at(k), r, theta).curl;
  }
  return w;
}

double BasisSet::norm_H_sq(const Eigen::VectorXd& c) const {
  double s = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) s += modes_[k].lambda * c[k] * c[k];
  return s;
}

double inner_l2(const DiskGrid& g, const VectorField& f, const VectorField& h) {
  require_on_grid(g, f, "inner_l2");
  require_on_grid(g, h, "inner_l2");
  return g.integrate(f.u1.cwiseProduct(h.u1) + f.u2.cwiseProduct(h.u2));
}

double inner_l2(const DiskGrid& g, const ScalarField& f, const ScalarField& h) {
  require_on_grid(g, f.v, "inner_l2");
  require_on_grid(g, h.v, "inner_l2");
  return g.integrate(f.v.cwiseProduct(h.v));
}

double inner_h1(const DiskGrid& g, const VectorField& f, const VectorField& h) {
  require_on_grid(g, f, "inner_h1");
  require_on_grid(g, h, "inner_h1");
  const Array2 s = g.d_x(f.u1).cwiseProduct(g.d_x(h.u1)) + g.d_y(f.u1).cwiseProduct(g.d_y(h.u1)) +
                   g.d_x(f.u2).cwiseProduct(g.d_x(h.u2)) + g.d_y(f.u2).cwiseProduct(g.d_y(h.u2));
  return g.integrate(s);
}

double inner_boundary(const DiskGrid& g, const VectorField& f, const VectorField& h) {
  require_on_grid(g, f, "inner_boundary");
  require_on_grid(g, h, "inner_boundary");
  const Eigen::VectorXd prod = g.boundary_values(f.u1).cwiseProduct(g.boundary_values(h.u1)) +
                               g.boundary_values(f.u2).cwiseProduct(g.boundary_values(h.u2));
  return g.integrate_boundary(prod);
}

double inner_H(const BasisSet& basis, const VectorField& f, const VectorField& h) {
  constexpr double kappa = 1.0;
  const DiskGrid& g = basis.grid();
  return inner_h1(g, f, h) - (kappa - basis.alpha()) * inner_boundary(g, f, h);
}

void write_spectrum_csv(std::ostream& os, const BasisSet& basis) {
  os << "n,parity,k,sigma,lambda,harmonic_coeff,norm_const\n";
  for (const auto& m : basis.modes()) {
    os << m.n << ',' << to_string(m.parity) << ',' << m.k << ',' << fmt17(m.sigma) << ','
       << fmt17(m.lambda) << ',' << fmt17(m.harmonic_coeff) << ',' << fmt17(m.norm_const) << '\n';
  }
}

}  // namespace sdns
