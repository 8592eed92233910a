#include "sdns/studies.hpp"

#include "sdns/vorticity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace sdns {

std::vector<double> RefinementStudy::ratios() const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) out.push_back(errors[i] / errors[i + 1]);
  return out;
}

std::vector<double> RefinementStudy::orders() const {
  std::vector<double> out;
  for (double r : ratios()) out.push_back(std::log2(r));
  return out;
}

double RefinementStudy::fitted_order() const {
  const std::size_t n = errors.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(dt[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

SimConfig study_config(const SimConfig& cfg) {
  SimConfig c = cfg;
  c.hitting_M = std::numeric_limits<double>::infinity();
  return c;
}

void check_levels(int levels) {
  if (levels < 2) throw std::invalid_argument("refinement study: levels must be >= 2");
}

BrownianPath silent_path(int n_steps, double dt) {
  BrownianPath p;
  p.dt = dt;
  p.dW = Eigen::MatrixXd::Zero(n_steps, 0);
  return p;
}

// Final Galerkin state along `path`, stepping with `scheme` regardless of cfg.scheme.
Eigen::VectorXd galerkin_final(const GalerkinSystem& sys, const Eigen::VectorXd& c0,
                               const BrownianPath& path, Scheme scheme) {
  SolverState s = sys.initial_state(c0);
  for (int k = 0; k < path.n_steps(); ++k) {
    const Eigen::VectorXd dW = path.dW.row(k).transpose();
    s = scheme == Scheme::ItoEuler ? sys.step_ito(s, dW, path.dt)
                                   : sys.step_strat_heun(s, dW, path.dt);
  }
  return s.c;
}

}  // namespace

RefinementStudy decay_study(const SimConfig& cfg_in, int levels) {
  check_levels(levels);
  SimConfig cfg = study_config(cfg_in);
  cfg.noise.enabled = false;
  cfg.nonlinear = false;
  cfg.ic.type = InitialCondition::Type::Mode;
  const GalerkinSystem sys(cfg);
  const Eigen::VectorXd c0 = initial_coefficients(cfg.ic, sys.basis());
  const double exact =
      cfg.ic.amplitude * std::exp(-cfg.nu * sys.basis().mode(cfg.ic.mode).lambda * cfg.t_end);

  RefinementStudy out;
  double dt = cfg.dt;
  int n = cfg.n_steps();
  for (int l = 0; l < levels; ++l, dt *= 0.5, n *= 2) {
    const Eigen::VectorXd c = galerkin_final(sys, c0, silent_path(n, dt), cfg.scheme);
    out.dt.push_back(dt);
    out.errors.push_back(std::abs(c[cfg.ic.mode] - exact));
  }
  return out;
}

RefinementStudy energy_balance_study(const SimConfig& cfg_in, int levels) {
  check_levels(levels);
  SimConfig cfg = study_config(cfg_in);
  cfg.noise.enabled = false;
  const GalerkinSystem sys(cfg);
  const Eigen::VectorXd c0 = initial_coefficients(cfg.ic, sys.basis());

  RefinementStudy out;
  double dt = cfg.dt;
  int n = cfg.n_steps();
  for (int l = 0; l < levels; ++l, dt *= 0.5, n *= 2) {
    const TrajectoryOutput run = sys.run(c0, silent_path(n, dt));
    out.dt.push_back(dt);
    out.errors.push_back(std::abs(run.rows.back().energy_defect));
  }
  return out;
}

RefinementStudy enstrophy_study(const SimConfig& cfg_in, std::uint64_t seed, int levels) {
  check_levels(levels);
  const SimConfig cfg = study_config(cfg_in);
  const VorticitySystem sys(cfg);
  const Eigen::VectorXd w0 = initial_vorticity(cfg.ic, sys.basis());

  RefinementStudy out;
  BrownianPath path = sample_path(seed, cfg.n_steps(), cfg.dt, sys.noise_modes());
  for (int l = 0; l < levels; ++l) {
    if (l > 0) path = refine(path);
    const VorticityOutput run = sys.run(w0, path);
    out.dt.push_back(path.dt);
    out.errors.push_back(std::abs(run.rows.back().enstrophy_defect));
  }
  return out;
}

RefinementStudy transport_study(const SimConfig& cfg_in, std::uint64_t seed, int levels) {
  check_levels(levels);
  SimConfig cfg = study_config(cfg_in);
  cfg.nu = 0.0;
  cfg.nonlinear = false;
  cfg.noise.enabled = true;
  cfg.noise.modes = 1;
  const VorticitySystem sys(cfg);
  const Eigen::VectorXd w0 = initial_vorticity(cfg.ic, sys.basis());

  RefinementStudy out;
  BrownianPath path = sample_path(seed, cfg.n_steps(), cfg.dt, 1);
  for (int l = 0; l < levels; ++l) {
    if (l > 0) path = refine(path);
    const VorticityOutput run = sys.run(w0, path);
    out.dt.push_back(path.dt);
    out.errors.push_back(std::abs(run.final_state.w.norm() - w0.norm()));
  }
  return out;
}

RefinementStudy ito_strat_study(const SimConfig& cfg_in, std::uint64_t seed, int paths,
                                int levels) {
  check_levels(levels);
  if (paths < 1) throw std::invalid_argument("ito_strat_study: paths must be >= 1");
  SimConfig cfg = study_config(cfg_in);
  cfg.scheme = Scheme::ItoEuler;  // drift() then carries the corrector
  const GalerkinSystem sys(cfg);
  const Eigen::VectorXd c0 = initial_coefficients(cfg.ic, sys.basis());

  Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(paths, levels);
  std::vector<std::exception_ptr> errors(paths);
  auto work = [&](int p) {
    try {
      BrownianPath path = sample_path(seed ^ static_cast<std::uint64_t>(p), cfg.n_steps(), cfg.dt,
                                      sys.noise_modes());
      for (int l = 0; l < levels; ++l) {
        if (l > 0) path = refine(path);
        const Eigen::VectorXd ito = galerkin_final(sys, c0, path, Scheme::ItoEuler);
        const Eigen::VectorXd heun = galerkin_final(sys, c0, path, Scheme::StratHeun);
        sq(p, l) = (ito - heun).squaredNorm();
      }
    } catch (...) {
      errors[p] = std::current_exception();
    }
  };
  const int workers = std::max(1, std::min<int>(paths, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int p = w; p < paths; p += workers) work(p);
    });
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  RefinementStudy out;
  double dt = cfg.dt;
  for (int l = 0; l < levels; ++l, dt *= 0.5) {
    out.dt.push_back(dt);
    out.errors.push_back(std::sqrt(sq.col(l).mean()));
  }
  return out;
}

double cross_formulation_gap(const SimConfig& cfg_in, std::uint64_t seed) {
  SimConfig cfg = study_config(cfg_in);
  cfg.alpha = 2.0;
  const GalerkinSystem gal(cfg);
  const VorticitySystem vor(cfg);
  const Eigen::VectorXd sigma = vor.basis().sigmas();
  const Eigen::VectorXd c0 = initial_coefficients(cfg.ic, gal.basis());
  const BrownianPath path = sample_path(seed, cfg.n_steps(), cfg.dt, gal.noise_modes());

  SolverState s = gal.initial_state(c0);
  VorticityState v = vor.initial_state(-sigma.cwiseProduct(c0));
  double gap = 0.0, size = c0.norm();
  for (int k = 0; k < path.n_steps(); ++k) {
    const Eigen::VectorXd dW = path.dW.row(k).transpose();
    s = gal.step(s, dW, path.dt);
    v = vor.step(v, dW, path.dt);
    // The alpha = 2 Stokes mode a_k has vorticity -sigma_k e_k.
    gap = std::max(gap, (s.c + v.w.cwiseQuotient(sigma)).norm());
    size = std::max(size, s.c.norm());
  }
  return gap / size;
}

}  // namespace sdns
