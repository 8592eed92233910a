#include "sdns/vorticity.hpp"

#include "sdns/bessel.hpp"
#include "sdns/format.hpp"
#include "sdns/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <tuple>

namespace sdns {

using std::numbers::pi;

namespace {

// Zeros of J_n are the alpha = 2 roots of the slip characteristic.
constexpr double kFreeAlpha = 2.0;

std::vector<DirichletMode> ordered_modes(int n_modes) {
  double ceiling = 4.0 + 2.0 * std::sqrt(static_cast<double>(n_modes)) + 0.5 * n_modes;
  for (;;) {
    std::vector<DirichletMode> cands;
    for (int n = 0;; ++n) {
      const auto roots = sigmas_below(n, kFreeAlpha, ceiling);
      if (roots.empty()) break;
      for (std::size_t k = 0; k < roots.size(); ++k) {
        cands.push_back({n, Parity::Cos, static_cast<int>(k) + 1, roots[k], 0.0});
        if (n > 0) cands.push_back({n, Parity::Sin, static_cast<int>(k) + 1, roots[k], 0.0});
      }
    }
    if (static_cast<int>(cands.size()) > n_modes) {
      std::sort(cands.begin(), cands.end(), [](const DirichletMode& a, const DirichletMode& b) {
        return std::make_tuple(a.sigma, a.n, static_cast<int>(a.parity), a.k) <
               std::make_tuple(b.sigma, b.n, static_cast<int>(b.parity), b.k);
      });
      cands.resize(n_modes);
      return cands;
    }
    ceiling *= 1.5;
  }
}

}  // namespace

DirichletBasis::DirichletBasis(int n_modes, std::shared_ptr<const DiskGrid> grid)
    : grid_(std::move(grid)) {
  if (n_modes < 1) throw std::invalid_argument("DirichletBasis: n_modes must be >= 1");
  if (!grid_) throw std::invalid_argument("DirichletBasis: null grid");
  modes_ = ordered_modes(n_modes);
  int max_n = 0, max_k = 1;
  for (const auto& m : modes_) {
    max_n = std::max(max_n, m.n);
    max_k = std::max(max_k, m.k);
  }
  const DiskGrid& g = *grid_;
  if (g.n_theta() < 2 * max_n + 2 || g.n_r() < 2 * max_k) {
    std::ostringstream msg;
    msg << "DirichletBasis: grid " << g.n_r() << "x" << g.n_theta()
        << " too coarse for angular order " << max_n << " and radial index " << max_k;
    throw std::invalid_argument(msg.str());
  }

  const int nr = g.n_r(), nt = g.n_theta();
  const Eigen::Index p = static_cast<Eigen::Index>(nr) * nt;
  const int n = size();
  values_.resize(p, n);
  grads_.resize(2 * p, n);
  vels_.resize(2 * p, n);
  for (int k = 0; k < n; ++k) {
    DirichletMode& m = modes_[k];
    const double jn1 = bessel_j(m.n + 1, m.sigma);
    const double ang = (m.n == 0) ? 2.0 * pi : pi;
    m.norm_const = 1.0 / std::sqrt(ang * 0.5 * jn1 * jn1);
    for (int i = 0; i < nr; ++i) {
      const double r = g.r_nodes()[i];
      const auto j = bessel_j_orders(m.n + 1, m.sigma * r);
      const double jn = j[m.n];
      const double jnp = (m.n == 0) ? -j[1] : 0.5 * (j[m.n - 1] - j[m.n + 1]);
      for (int jt = 0; jt < nt; ++jt) {
        const double th = g.theta_nodes()[jt];
        const double t = (m.parity == Parity::Cos) ? std::cos(m.n * th) : std::sin(m.n * th);
        const double tp =
            (m.parity == Parity::Cos) ? -m.n * std::sin(m.n * th) : m.n * std::cos(m.n * th);
        const double e_r = m.norm_const * m.sigma * jnp * t;
        const double e_t_over_r = m.norm_const * jn * tp / r;
        const double c = g.cos_theta()(i, jt), s = g.sin_theta()(i, jt);
        const double ex = c * e_r - s * e_t_over_r;
        const double ey = s * e_r + c * e_t_over_r;
        const Eigen::Index idx = static_cast<Eigen::Index>(i) * nt + jt;
        values_(idx, k) = m.norm_const * jn * t;
        grads_(idx, k) = ex;
        grads_(p + idx, k) = ey;
        const double inv_s2 = 1.0 / (m.sigma * m.sigma);
        vels_(idx, k) = ey * inv_s2;
        vels_(p + idx, k) = -ex * inv_s2;
      }
    }
  }
  const Eigen::Map<const Eigen::VectorXd> wflat(g.weights().data(), p);
  weighted_ = wflat.asDiagonal() * values_;

  Eigen::MatrixXd vg(4 * p, n);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[k] = 1.0;
    const VectorField u = velocity(e);
    const Array2 parts[4] = {g.d_x(u.u1), g.d_y(u.u1), g.d_x(u.u2), g.d_y(u.u2)};
    for (int q = 0; q < 4; ++q)
      vg.col(k).segment(q * p, p) = Eigen::Map<const Eigen::VectorXd>(parts[q].data(), p);
  }
  Eigen::VectorXd w4(4 * p);
  for (int q = 0; q < 4; ++q) w4.segment(q * p, p) = wflat;
  velocity_gram_h1_ = vg.transpose() * w4.asDiagonal() * vg;
}

Eigen::VectorXd DirichletBasis::sigmas() const {
  Eigen::VectorXd s(size());
  for (int k = 0; k < size(); ++k) s[k] = modes_[k].sigma;
  return s;
}

ScalarField DirichletBasis::synthesize(const Eigen::VectorXd& w) const {
  if (w.size() != size()) throw std::invalid_argument("DirichletBasis::synthesize: length mismatch");
  ScalarField s{grid_->zeros()};
  Eigen::Map<Eigen::VectorXd>(s.v.data(), s.v.size()) = values_ * w;
  return s;
}

Eigen::VectorXd DirichletBasis::analyze(const ScalarField& s) const {
  require_on_grid(*grid_, s.v, "DirichletBasis::analyze");
  return weighted_.transpose() * Eigen::Map<const Eigen::VectorXd>(s.v.data(), s.v.size());
}

VectorField DirichletBasis::velocity(const Eigen::VectorXd& w) const {
  if (w.size() != size()) throw std::invalid_argument("DirichletBasis::velocity: length mismatch");
  VectorField u = VectorField::zeros(*grid_);
  const Eigen::Index p = u.u1.size();
  Eigen::Map<Eigen::VectorXd>(u.u1.data(), p) = vels_.topRows(p) * w;
  Eigen::Map<Eigen::VectorXd>(u.u2.data(), p) = vels_.bottomRows(p) * w;
  return u;
}

VectorField DirichletBasis::gradient(const Eigen::VectorXd& w) const {
  if (w.size() != size()) throw std::invalid_argument("DirichletBasis::gradient: length mismatch");
  VectorField d = VectorField::zeros(*grid_);
  const Eigen::Index p = d.u1.size();
  Eigen::Map<Eigen::VectorXd>(d.u1.data(), p) = grads_.topRows(p) * w;
  Eigen::Map<Eigen::VectorXd>(d.u2.data(), p) = grads_.bottomRows(p) * w;
  return d;
}

double DirichletBasis::velocity_l2_sq(const Eigen::VectorXd& w) const {
  double s = 0.0;
  for (int k = 0; k < size(); ++k) s += w[k] * w[k] / (modes_[k].sigma * modes_[k].sigma);
  return s;
}

double DirichletBasis::grad_sq(const Eigen::VectorXd& w) const {
  double s = 0.0;
  for (int k = 0; k < size(); ++k) s += modes_[k].sigma * modes_[k].sigma * w[k] * w[k];
  return s;
}

VectorField velocity_from_vorticity(const DiskGrid& g, const ScalarField& w) {
  const auto sol = g.solve_dirichlet_poisson(w.v);
  const Array2 psi_t_over_r = g.d_theta(sol.psi).cwiseProduct(g.inv_r());
  VectorField u;
  u.u1 = -(g.sin_theta().cwiseProduct(sol.psi_r) + g.cos_theta().cwiseProduct(psi_t_over_r));
  u.u2 = g.cos_theta().cwiseProduct(sol.psi_r) - g.sin_theta().cwiseProduct(psi_t_over_r);
  return u;
}

void write_vorticity_csv(std::ostream& os, const VorticityOutput& out) {
  os << "t,enstrophy,grad_w_sq,l2_sq,h1_sq,enstrophy_defect\n";
  for (const auto& r : out.rows) {
    os << fmt17(r.t) << ',' << fmt17(r.enstrophy) << ',' << fmt17(r.grad_sq) << ','
       << fmt17(r.l2_sq) << ',' << fmt17(r.h1_sq) << ',' << fmt17(r.enstrophy_defect) << '\n';
  }
}

VorticitySystem::VorticitySystem(const SimConfig& cfg, std::shared_ptr<const DirichletBasis> basis,
                                 const NoiseModel& noise)
    : cfg_(cfg), basis_(std::move(basis)), noise_(noise) {
  cfg_.validate();
  if (cfg_.alpha != kFreeAlpha)
    throw std::invalid_argument("sim.alpha: the vorticity formulation requires alpha = 2");
  if (basis_->size() != cfg_.n_modes)
    throw std::invalid_argument("VorticitySystem: basis size differs from sim.n_modes");
  precompute();
}

VorticitySystem::VorticitySystem(const SimConfig& cfg)
    : VorticitySystem(cfg,
                      std::make_shared<const DirichletBasis>(
                          cfg.n_modes, std::make_shared<const DiskGrid>(cfg.n_r, cfg.n_theta)),
                      build_xi_library(cfg.noise.modes, cfg.noise.decay_rate, cfg.noise.bump)) {}

void VorticitySystem::precompute() {
  const DiskGrid& g = basis_->grid();
  const int n = size();
  const Eigen::VectorXd s = basis_->sigmas();
  sigma2_ = s.cwiseProduct(s);

  std::vector<VectorField> vel, grad;
  std::vector<ScalarField> val;
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[k] = 1.0;
    vel.push_back(basis_->velocity(e));
    grad.push_back(basis_->gradient(e));
    val.push_back(basis_->synthesize(e));
  }

  tensor_.resize(n, static_cast<Eigen::Index>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const ScalarField adv{g.dealiased_product(vel[i].u1, grad[j].u1) +
                            g.dealiased_product(vel[i].u2, grad[j].u2)};
      tensor_.col(i * n + j) = basis_->analyze(adv);
    }
  }

  corrector_ = Eigen::MatrixXd::Zero(n, n);
  L_.clear();
  if (!cfg_.noise.enabled) return;
  for (const auto& xi_field : noise_.fields()) {
    const VectorField xi = xi_field.sample(g).value;
    Eigen::MatrixXd L(n, n), full(n, n);
    for (int j = 0; j < n; ++j) {
      const ScalarField once{g.dealiased_product(xi.u1, grad[j].u1) +
                             g.dealiased_product(xi.u2, grad[j].u2)};
      L.col(j) = basis_->analyze(once);
      if (cfg_.ito_corrector == ItoCorrector::Full)
        full.col(j) = basis_->analyze(advect_scalar(g, xi, once));
    }
    corrector_ += 0.5 * (cfg_.ito_corrector == ItoCorrector::Full ? full : L * L);
    L_.push_back(std::move(L));
  }
}

Eigen::VectorXd VorticitySystem::nonlinear(const Eigen::VectorXd& w) const {
  const int n = size();
  if (w.size() != n) throw std::invalid_argument("nonlinear: coefficient length mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (w[i] == 0.0) continue;
    out += w[i] * (tensor_.middleCols(static_cast<Eigen::Index>(i) * n, n) * w);
  }
  return out;
}

Eigen::VectorXd VorticitySystem::nonlinear_grid(const Eigen::VectorXd& w) const {
  const DiskGrid& g = basis_->grid();
  const VectorField u = velocity_from_vorticity(g, basis_->synthesize(w));
  return basis_->analyze(advect_scalar(g, u, basis_->synthesize(w)));
}

Eigen::VectorXd VorticitySystem::drift_stratonovich(const Eigen::VectorXd& w) const {
  Eigen::VectorXd f = -cfg_.nu * sigma2_.cwiseProduct(w);
  if (cfg_.nonlinear) f -= nonlinear(w);
  return f;
}

Eigen::VectorXd VorticitySystem::drift(const Eigen::VectorXd& w) const {
  Eigen::VectorXd f = drift_stratonovich(w);
  if (cfg_.scheme == Scheme::ItoEuler && !L_.empty()) f += corrector_ * w;
  return f;
}

Eigen::MatrixXd VorticitySystem::diffusion(const Eigen::VectorXd& w) const {
  Eigen::MatrixXd g(size(), noise_modes());
  for (int i = 0; i < noise_modes(); ++i) g.col(i) = -(L_[i] * w);
  return g;
}

VorticityState VorticitySystem::initial_state(const Eigen::VectorXd& w0) const {
  if (w0.size() != size()) throw std::invalid_argument("initial_state: coefficient length mismatch");
  VorticityState s;
  s.w = w0;
  s.ledger.enstrophy_initial = w0.squaredNorm();
  return s;
}

VorticityState VorticitySystem::finish_step(const VorticityState& s, Eigen::VectorXd w_new,
                                            double dt) const {
  if (!w_new.allFinite())
    throw BlowUpError("non-finite vorticity state at t = " + fmt17(s.t + dt), s.t + dt);
  VorticityState out = s;
  out.ledger.int_grad_sq += 0.5 * dt * (basis_->grad_sq(s.w) + basis_->grad_sq(w_new));
  out.w = std::move(w_new);
  out.t = s.t + dt;
  out.steps = s.steps + 1;
  return out;
}

VorticityState VorticitySystem::step_ito(const VorticityState& s, const Eigen::VectorXd& dW,
                                         double dt) const {
  if (dW.size() != noise_modes()) throw std::invalid_argument("step_ito: increment count mismatch");
  return finish_step(s, s.w + dt * drift(s.w) + diffusion(s.w) * dW, dt);
}

VorticityState VorticitySystem::step_strat_heun(const VorticityState& s, const Eigen::VectorXd& dW,
                                                double dt) const {
  if (dW.size() != noise_modes())
    throw std::invalid_argument("step_strat_heun: increment count mismatch");
  const Eigen::VectorXd f0 = drift_stratonovich(s.w);
  const Eigen::VectorXd g0 = diffusion(s.w) * dW;
  const Eigen::VectorXd pred = s.w + dt * f0 + g0;
  const Eigen::VectorXd f1 = drift_stratonovich(pred);
  const Eigen::VectorXd g1 = diffusion(pred) * dW;
  return finish_step(s, s.w + 0.5 * dt * (f0 + f1) + 0.5 * (g0 + g1), dt);
}

VorticityState VorticitySystem::step(const VorticityState& s, const Eigen::VectorXd& dW,
                                     double dt) const {
  return cfg_.scheme == Scheme::ItoEuler ? step_ito(s, dW, dt) : step_strat_heun(s, dW, dt);
}

VorticityRow VorticitySystem::row_of(const VorticityState& s) const {
  VorticityRow r{};
  r.t = s.t;
  r.enstrophy = s.w.squaredNorm();
  r.grad_sq = basis_->grad_sq(s.w);
  r.l2_sq = basis_->velocity_l2_sq(s.w);
  r.h1_sq = basis_->velocity_h1_sq(s.w);
  r.enstrophy_defect = r.enstrophy + 2.0 * cfg_.nu * s.ledger.int_grad_sq - s.ledger.enstrophy_initial;
  return r;
}

VorticityOutput VorticitySystem::run(const Eigen::VectorXd& w0, const BrownianPath& path,
                                     bool keep_history) const {
  if (path.modes() != noise_modes())
    throw std::invalid_argument("run: path has " + std::to_string(path.modes()) +
                                " noise modes, system has " + std::to_string(noise_modes()));
  VorticityOutput out;
  VorticityState s = initial_state(w0);
  out.rows.push_back(row_of(s));
  if (keep_history) out.history.push_back(s.w);
  for (int k = 0; k < path.n_steps(); ++k) {
    s = step(s, path.dW.row(k).transpose(), path.dt);
    out.rows.push_back(row_of(s));
    if (keep_history) out.history.push_back(s.w);
  }
  out.final_state = std::move(s);
  return out;
}

Eigen::VectorXd initial_vorticity(const InitialCondition& ic, const DirichletBasis& basis) {
  // Same presets as the velocity form, expressed in the alpha = 2 Stokes basis
  // a_k = grad_perp(e_k) / sigma_k, whose vorticity is -sigma_k e_k.
  const int n = basis.size();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd s = basis.sigmas();
  switch (ic.type) {
    case InitialCondition::Type::Mode:
      if (ic.mode < 0 || ic.mode >= n) throw std::invalid_argument("sim.ic.mode: out of range");
      c[ic.mode] = ic.amplitude;
      break;
    case InitialCondition::Type::Random: {
      const int bw = ic.bandwidth > 0 ? std::min(ic.bandwidth, n) : n;
      for (int k = 0; k < bw; ++k) c[k] = keyed_normal(ic.seed, k, 0, 0) / s[k];
      const Eigen::VectorXd w = -s.cwiseProduct(c);
      const double norm = ic.h1_norm > 0.0 ? std::sqrt(basis.velocity_h1_sq(w)) : c.norm();
      c *= (ic.h1_norm > 0.0 ? ic.h1_norm : ic.amplitude) / norm;
      break;
    }
    case InitialCondition::Type::Coeffs:
      if (static_cast<int>(ic.coeffs.size()) > n)
        throw std::invalid_argument("sim.ic.coeffs: more entries than modes");
      for (std::size_t k = 0; k < ic.coeffs.size(); ++k) c[k] = ic.coeffs[k];
      break;
  }
  return -s.cwiseProduct(c);
}

std::vector<SweepEntry> viscosity_sweep(const SimConfig& base, const std::vector<double>& nu_list) {
  if (base.alpha != kFreeAlpha)
    throw std::invalid_argument("sim.alpha: the viscosity sweep requires alpha = 2");
  if (nu_list.empty()) throw std::invalid_argument("sweep.nu_list: empty");
  for (std::size_t k = 0; k < nu_list.size(); ++k) {
    if (!(nu_list[k] > 0.0)) throw std::invalid_argument("sweep.nu_list: entries must be > 0");
    if (k > 0 && nu_list[k] > nu_list[k - 1])
      throw std::invalid_argument("sweep.nu_list: must be non-increasing");
  }
  SimConfig cfg = base;
  cfg.nu = nu_list.front();
  const VorticitySystem first(cfg);
  const auto basis = first.basis_ptr();
  const BrownianPath path = path_for(cfg, cfg.noise.seed);
  const Eigen::VectorXd w0 = initial_vorticity(cfg.ic, *basis);

  std::vector<VorticityOutput> runs;
  for (double nu : nu_list) {
    cfg.nu = nu;
    const VorticitySystem sys(cfg, basis, first.noise());
    runs.push_back(sys.run(w0, path, true));
  }

  std::vector<SweepEntry> out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < runs.size(); ++k) {
    SweepEntry e{nu_list[k], nan, 0.0, runs[k].rows.back().enstrophy_defect};
    for (const auto& r : runs[k].rows) e.sup_h1_norm = std::max(e.sup_h1_norm, std::sqrt(r.h1_sq));
    if (k + 1 < runs.size()) {
      double sup = 0.0;
      for (std::size_t t = 0; t < runs[k].history.size(); ++t)
        sup = std::max(sup, basis->velocity_l2_sq(runs[k].history[t] - runs[k + 1].history[t]));
      e.sup_l2_diff_to_next = std::sqrt(sup);
    }
    out.push_back(e);
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepEntry>& entries) {
  os << "nu,sup_l2_diff_to_next,sup_h1_norm,enstrophy_defect_T\n";
  for (const auto& e : entries) {
    os << fmt17(e.nu) << ',' << fmt17(e.sup_l2_diff_to_next) << ',' << fmt17(e.sup_h1_norm) << ','
       << fmt17(e.enstrophy_defect_T) << '\n';
  }
}

}  // namespace sdns
