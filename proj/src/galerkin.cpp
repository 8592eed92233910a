#include "sdns/galerkin.hpp"

#include "sdns/format.hpp"
#include "sdns/operators.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>

namespace sdns {

const char* to_string(Scheme s) { return s == Scheme::ItoEuler ? "ito-euler" : "strat-heun"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "ito-euler") return Scheme::ItoEuler;
  if (s == "strat-heun") return Scheme::StratHeun;
  throw std::invalid_argument("unknown scheme '" + s + "' (expected ito-euler or strat-heun)");
}

const char* to_string(ItoCorrector c) { return c == ItoCorrector::Galerkin ? "galerkin" : "full"; }

ItoCorrector ito_corrector_from_string(const std::string& s) {
  if (s == "galerkin") return ItoCorrector::Galerkin;
  if (s == "full") return ItoCorrector::Full;
  throw std::invalid_argument("unknown Ito corrector '" + s + "' (expected galerkin or full)");
}

namespace {

void require(bool ok, const char* key, const std::string& what) {
  if (!ok) throw std::invalid_argument(std::string(key) + ": " + what);
}

}  // namespace

void SimConfig::validate() const {
  require(nu >= 0.0, "sim.nu", "must be >= 0");
  require(alpha >= 0.0, "sim.alpha", "must be >= 0");
  require(n_modes >= 1, "sim.n_modes", "must be >= 1");
  require(dt > 0.0, "sim.dt", "must be > 0");
  require(t_end >= dt, "sim.t_end", "must be >= sim.dt");
  require(hitting_M > 1.0, "sim.hitting_M", "must be > 1");
  require(n_r >= 4, "grid.n_r", "must be >= 4");
  require(n_theta >= 4 && n_theta % 2 == 0, "grid.n_theta", "must be even and >= 4");
  require(noise.modes >= 1, "noise.modes", "must be >= 1");
  require(noise.decay_rate > 0.0, "noise.decay_rate", "must be > 0");
  require(noise.bump.radius > 0.0 && noise.bump.radius < 0.9, "noise.bump.radius",
          "must lie in (0, 0.9)");
  require(noise.bump.power >= 5, "noise.bump.power", "must be >= 5");
  require(noise.bump.amplitude >= 0.0, "noise.bump.amplitude", "must be >= 0");
  switch (ic.type) {
    case InitialCondition::Type::Mode:
      require(ic.mode >= 0 && ic.mode < n_modes, "sim.ic.mode", "must lie in [0, sim.n_modes)");
      break;
    case InitialCondition::Type::Random:
      require(ic.bandwidth >= 0 && ic.bandwidth <= n_modes, "sim.ic.bandwidth",
              "must lie in [0, sim.n_modes]");
      break;
    case InitialCondition::Type::Coeffs:
      require(!ic.coeffs.empty() && static_cast<int>(ic.coeffs.size()) <= n_modes,
              "sim.ic.coeffs", "needs between 1 and sim.n_modes entries");
      break;
  }
}

int SimConfig::n_steps() const { return static_cast<int>(std::llround(t_end / dt)); }

void write_trajectory_csv(std::ostream& os, const TrajectoryOutput& out) {
  os << "t,l2_sq,h1_sq,H_sq,energy_defect,hit_flag\n";
  for (const auto& r : out.rows) {
    os << fmt17(r.t) << ',' << fmt17(r.l2_sq) << ',' << fmt17(r.h1_sq) << ',' << fmt17(r.H_sq)
       << ',' << fmt17(r.energy_defect) << ',' << (r.hit ? 1 : 0) << '\n';
  }
}

Eigen::VectorXd initial_coefficients(const InitialCondition& ic, const BasisSet& basis) {
  const int n = basis.size();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  switch (ic.type) {
    case InitialCondition::Type::Mode:
      if (ic.mode < 0 || ic.mode >= n) throw std::invalid_argument("sim.ic.mode: out of range");
      c[ic.mode] = ic.amplitude;
      break;
    case InitialCondition::Type::Random: {
      const int bw = ic.bandwidth > 0 ? std::min(ic.bandwidth, n) : n;
      for (int k = 0; k < bw; ++k)
        c[k] = keyed_normal(ic.seed, k, 0, 0) / std::sqrt(basis.mode(k).lambda);
      const double norm = ic.h1_norm > 0.0 ? std::sqrt(basis.norm_h1_sq(c)) : c.norm();
      c *= (ic.h1_norm > 0.0 ? ic.h1_norm : ic.amplitude) / norm;
      break;
    }
    case InitialCondition::Type::Coeffs:
      if (static_cast<int>(ic.coeffs.size()) > n)
        throw std::invalid_argument("sim.ic.coeffs: more entries than modes");
      for (std::size_t k = 0; k < ic.coeffs.size(); ++k) c[k] = ic.coeffs[k];
      break;
  }
  return c;
}

GalerkinSystem::GalerkinSystem(const SimConfig& cfg, std::shared_ptr<const BasisSet> basis,
                               const NoiseModel& noise)
    : cfg_(cfg), basis_(std::move(basis)), noise_(noise) {
  cfg_.validate();
  if (basis_->size() != cfg_.n_modes)
    throw std::invalid_argument("GalerkinSystem: basis size differs from sim.n_modes");
  precompute();
}

GalerkinSystem::GalerkinSystem(const SimConfig& cfg)
    : GalerkinSystem(cfg,
                     std::make_shared<const BasisSet>(BasisSet::build(
                         cfg.alpha, cfg.n_modes,
                         std::make_shared<const DiskGrid>(cfg.n_r, cfg.n_theta))),
                     build_xi_library(cfg.noise.modes, cfg.noise.decay_rate, cfg.noise.bump)) {}

void GalerkinSystem::precompute() {
  const DiskGrid& g = basis_->grid();
  const int n = size();
  lambda_ = basis_->eigenvalues();

  std::vector<VectorField> modes;
  std::vector<VectorGradient> grads;
  for (int k = 0; k < n; ++k) {
    modes.push_back(basis_->mode_field(k));
    grads.push_back(gradient(g, modes.back()));
  }

  tensor_.resize(n, static_cast<Eigen::Index>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) tensor_.col(i * n + j) = basis_->analyze(advect(g, modes[i], grads[j]));

  corrector_ = Eigen::MatrixXd::Zero(n, n);
  K_.clear();
  if (!cfg_.noise.enabled) return;
  for (const auto& xi_field : noise_.fields()) {
    const FieldWithGradient xi = xi_field.sample(g);
    Eigen::MatrixXd K(n, n);
    Eigen::MatrixXd full(n, n);
    for (int j = 0; j < n; ++j) {
      const VectorField b = salt_B(g, xi, modes[j]);
      K.col(j) = basis_->analyze(b);
      if (cfg_.ito_corrector == ItoCorrector::Full)
        full.col(j) = basis_->analyze(salt_B(g, xi, leray_project(g, b)));
    }
    corrector_ += 0.5 * (cfg_.ito_corrector == ItoCorrector::Full ? full : K * K);
    K_.push_back(std::move(K));
  }
}

Eigen::VectorXd GalerkinSystem::nonlinear(const Eigen::VectorXd& c) const {
  const int n = size();
  if (c.size() != n) throw std::invalid_argument("nonlinear: coefficient length mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (c[i] == 0.0) continue;
    out += c[i] * (tensor_.middleCols(static_cast<Eigen::Index>(i) * n, n) * c);
  }
  return out;
}

Eigen::VectorXd GalerkinSystem::nonlinear_grid(const Eigen::VectorXd& c) const {
  const DiskGrid& g = basis_->grid();
  const VectorField u = basis_->synthesize(c);
  return basis_->analyze(leray_project(g, advect(g, u, u)));
}

Eigen::VectorXd GalerkinSystem::viscous(const Eigen::VectorXd& c) const {
  return -cfg_.nu * lambda_.cwiseProduct(c);
}

Eigen::VectorXd GalerkinSystem::drift_stratonovich(const Eigen::VectorXd& c) const {
  Eigen::VectorXd f = viscous(c);
  if (cfg_.nonlinear) f -= nonlinear(c);
  return f;
}

Eigen::VectorXd GalerkinSystem::drift(const Eigen::VectorXd& c) const {
  Eigen::VectorXd f = drift_stratonovich(c);
  if (cfg_.scheme == Scheme::ItoEuler && !K_.empty()) f += corrector_ * c;
  return f;
}

Eigen::MatrixXd GalerkinSystem::diffusion(const Eigen::VectorXd& c) const {
  Eigen::MatrixXd g(size(), noise_modes());
  for (int i = 0; i < noise_modes(); ++i) g.col(i) = -(K_[i] * c);
  return g;
}

SolverState GalerkinSystem::initial_state(const Eigen::VectorXd& c0) const {
  if (c0.size() != size()) throw std::invalid_argument("initial_state: coefficient length mismatch");
  SolverState s;
  s.c = c0;
  s.ledger.l2_sq_initial = c0.squaredNorm();
  s.ledger.sup_l2_sq = s.ledger.l2_sq_initial;
  return s;
}

SolverState GalerkinSystem::finish_step(const SolverState& s, Eigen::VectorXd c_new,
                                        double dt) const {
  if (!c_new.allFinite())
    throw BlowUpError("non-finite Galerkin state at t = " + fmt17(s.t + dt), s.t + dt);
  SolverState out = s;
  const double h1_old = basis_->norm_h1_sq(s.c), h1_new = basis_->norm_h1_sq(c_new);
  const double H_old = basis_->norm_H_sq(s.c), H_new = basis_->norm_H_sq(c_new);
  out.c = std::move(c_new);
  out.t = s.t + dt;
  out.steps = s.steps + 1;
  out.ledger.sup_l2_sq = std::max(s.ledger.sup_l2_sq, out.c.squaredNorm());
  out.ledger.int_h1_sq += 0.5 * dt * (h1_old + h1_new);
  out.ledger.int_H_sq += 0.5 * dt * (H_old + H_new);
  // An infinite threshold disables the monitor even if the ledger overflows.
  if (std::isfinite(cfg_.hitting_M) &&
      out.ledger.sup_l2_sq + out.ledger.int_h1_sq >= cfg_.hitting_M + out.ledger.l2_sq_initial)
    out.hit = out.t;
  return out;
}

SolverState GalerkinSystem::step_ito(const SolverState& s, const Eigen::VectorXd& dW,
                                     double dt) const {
  if (s.hit) return s;
  if (dW.size() != noise_modes()) throw std::invalid_argument("step_ito: increment count mismatch");
  Eigen::VectorXd inc = diffusion(s.c) * dW;
  if (!cfg_.integrating_factor) return finish_step(s, s.c + dt * drift(s.c) + inc, dt);
  const Eigen::ArrayXd E = (-cfg_.nu * dt * lambda_.array()).exp();
  const Eigen::VectorXd rest = drift(s.c) - viscous(s.c);
  return finish_step(s, (E * (s.c + dt * rest + inc).array()).matrix(), dt);
}

SolverState GalerkinSystem::step_strat_heun(const SolverState& s, const Eigen::VectorXd& dW,
                                            double dt) const {
  if (s.hit) return s;
  if (dW.size() != noise_modes())
    throw std::invalid_argument("step_strat_heun: increment count mismatch");
  const Eigen::VectorXd g0 = diffusion(s.c) * dW;
  if (!cfg_.integrating_factor) {
    const Eigen::VectorXd f0 = drift_stratonovich(s.c);
    const Eigen::VectorXd pred = s.c + dt * f0 + g0;
    const Eigen::VectorXd f1 = drift_stratonovich(pred);
    const Eigen::VectorXd g1 = diffusion(pred) * dW;
    return finish_step(s, s.c + 0.5 * dt * (f0 + f1) + 0.5 * (g0 + g1), dt);
  }
  const Eigen::ArrayXd E = (-cfg_.nu * dt * lambda_.array()).exp();
  const Eigen::VectorXd n0 = drift_stratonovich(s.c) - viscous(s.c);
  const Eigen::VectorXd pred = (E * (s.c + dt * n0 + g0).array()).matrix();
  const Eigen::VectorXd n1 = drift_stratonovich(pred) - viscous(pred);
  const Eigen::VectorXd g1 = diffusion(pred) * dW;
  const Eigen::ArrayXd base = E * (s.c + 0.5 * dt * n0 + 0.5 * g0).array();
  return finish_step(s, (base + (0.5 * dt * n1 + 0.5 * g1).array()).matrix(), dt);
}

SolverState GalerkinSystem::step(const SolverState& s, const Eigen::VectorXd& dW, double dt) const {
  return cfg_.scheme == Scheme::ItoEuler ? step_ito(s, dW, dt) : step_strat_heun(s, dW, dt);
}

TrajectoryRow GalerkinSystem::row_of(const SolverState& s) const {
  TrajectoryRow r{};
  r.t = s.t;
  r.l2_sq = s.c.squaredNorm();
  r.h1_sq = basis_->norm_h1_sq(s.c);
  r.H_sq = basis_->norm_H_sq(s.c);
  r.energy_defect = r.l2_sq + 2.0 * cfg_.nu * s.ledger.int_H_sq - s.ledger.l2_sq_initial;
  r.hit = s.hit.has_value();
  if (cfg_.nonlinear) {
    const Eigen::VectorXd nl = nonlinear(s.c);
    const double den = nl.norm() * s.c.norm();
    r.antisymmetry = den > 0.0 ? std::abs(nl.dot(s.c)) / den : 0.0;
  }
  return r;
}

TrajectoryOutput GalerkinSystem::run(const Eigen::VectorXd& c0, const BrownianPath& path) const {
  if (path.modes() != noise_modes())
    throw std::invalid_argument("run: path has " + std::to_string(path.modes()) +
                                " noise modes, system has " + std::to_string(noise_modes()));
  TrajectoryOutput out;
  SolverState s = initial_state(c0);
  out.rows.push_back(row_of(s));
  for (int k = 0; k < path.n_steps() && !s.hit; ++k) {
    s = step(s, path.dW.row(k).transpose(), path.dt);
    out.rows.push_back(row_of(s));
  }
  out.hit_time = s.hit;
  out.stopped_functional = s.ledger.sup_l2_sq + cfg_.nu * s.ledger.int_h1_sq;
  out.final_state = std::move(s);
  return out;
}

BrownianPath path_for(const SimConfig& cfg, std::uint64_t seed) {
  return sample_path(seed, cfg.n_steps(), cfg.dt, cfg.noise.enabled ? cfg.noise.modes : 0);
}

TrajectoryOutput run_trajectory(const SimConfig& cfg) {
  const GalerkinSystem sys(cfg);
  return sys.run(initial_coefficients(cfg.ic, sys.basis()), path_for(cfg, cfg.noise.seed));
}

EnsembleSummary ensemble(const GalerkinSystem& sys, const Eigen::VectorXd& c0, int n_paths) {
  if (n_paths < 1) throw std::invalid_argument("ensemble: n_paths must be >= 1");
  const SimConfig& cfg = sys.config();
  EnsembleSummary sum;
  sum.functionals.assign(n_paths, 0.0);
  sum.hit_times.assign(n_paths, std::nullopt);
  std::vector<std::exception_ptr> errors(n_paths);

  auto work = [&](int p) {
    try {
      const auto out = sys.run(c0, path_for(cfg, cfg.noise.seed ^ static_cast<std::uint64_t>(p)));
      sum.functionals[p] = out.stopped_functional;
      sum.hit_times[p] = out.hit_time;
    } catch (...) {
      errors[p] = std::current_exception();
    }
  };
  const int workers = std::max(1, std::min<int>(n_paths, std::thread::hardware_concurrency()));
  if (workers == 1) {
    for (int p = 0; p < n_paths; ++p) work(p);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int p = w; p < n_paths; p += workers) work(p);
      });
    for (auto& t : pool) t.join();
  }
  for (int p = 0; p < n_paths; ++p) {
    if (!errors[p]) continue;
    try {
      std::rethrow_exception(errors[p]);
    } catch (const std::exception& e) {
      throw std::runtime_error("ensemble path " + std::to_string(p) + ": " + e.what());
    }
  }

  double s = 0.0, s2 = 0.0;
  for (double v : sum.functionals) {
    s += v;
    s2 += v * v;
    sum.max = std::max(sum.max, v);
  }
  sum.mean = s / n_paths;
  if (n_paths > 1) {
    const double var = std::max(0.0, (s2 - n_paths * sum.mean * sum.mean) / (n_paths - 1));
    sum.std_error = std::sqrt(var / n_paths);
  }
  return sum;
}

EnsembleSummary ensemble(const SimConfig& cfg, int n_paths) {
  const GalerkinSystem sys(cfg);
  return ensemble(sys, initial_coefficients(cfg.ic, sys.basis()), n_paths);
}

}  // namespace sdns
