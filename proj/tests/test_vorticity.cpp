#include "doctest.h"

#include "sdns/disk_basis.hpp"
#include "sdns/operators.hpp"
#include "sdns/studies.hpp"
#include "sdns/vorticity.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

using namespace sdns;

namespace {

SimConfig small_config() {
  SimConfig cfg;
  cfg.n_modes = 8;
  cfg.n_r = 24;
  cfg.n_theta = 32;
  cfg.noise.modes = 3;
  cfg.dt = 0.01;
  cfg.t_end = 0.2;
  return cfg;
}

const VorticitySystem& shared_system() {
  static const VorticitySystem sys(small_config());
  return sys;
}

Eigen::VectorXd generic(int n, double phase = 0.0) {
  Eigen::VectorXd w(n);
  for (int k = 0; k < n; ++k) w[k] = std::cos(phase + 2.1 * k) * (1.0 + 0.2 * k);
  return w;
}

}  // namespace

TEST_CASE("Dirichlet basis") {
  const DirichletBasis& b = shared_system().basis();
  const DiskGrid& g = b.grid();
  CHECK(b.mode(0).sigma == doctest::Approx(2.404825557695773).epsilon(1e-13));
  CHECK(b.mode(1).sigma == doctest::Approx(3.8317059702075125).epsilon(1e-13));
  for (int j = 0; j < b.size(); ++j) {
    const ScalarField ej = b.synthesize(Eigen::VectorXd::Unit(b.size(), j));
    for (int k = 0; k < b.size(); ++k) {
      const ScalarField ek = b.synthesize(Eigen::VectorXd::Unit(b.size(), k));
      CHECK(std::abs(inner_l2(g, ej, ek) - (j == k)) < 1e-10);
    }
  }
  const Eigen::VectorXd w = generic(b.size());
  CHECK((b.analyze(b.synthesize(w)) - w).norm() < 1e-10 * w.norm());
  CHECK(g.boundary_values(b.synthesize(w).v).cwiseAbs().maxCoeff() < 1e-9 * w.norm());
  CHECK_THROWS_AS(b.synthesize(Eigen::VectorXd::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(DirichletBasis(0, b.grid_ptr()), std::invalid_argument);
}

TEST_CASE("Biot-Savart recovery") {
  const DirichletBasis& b = shared_system().basis();
  const DiskGrid& g = b.grid();
  CHECK(b.velocity(Eigen::VectorXd::Zero(b.size())).u1.isZero(0.0));

  // The first Dirichlet mode gives the first alpha = 2 Stokes mode direction.
  const VectorField u = b.velocity(Eigen::VectorXd::Unit(b.size(), 0));
  const BasisSet stokes = BasisSet::build(2.0, 1, b.grid_ptr());
  const VectorField a1 = stokes.mode_field(0);
  const double cosine = inner_l2(g, u, a1) / (norm_l2(g, u) * norm_l2(g, a1));
  CHECK(std::abs(cosine) == doctest::Approx(1.0).epsilon(1e-12));

  for (int s = 0; s < 5; ++s) {
    const Eigen::VectorXd w = generic(b.size(), s);
    const ScalarField ws = b.synthesize(w);
    const VectorField v = b.velocity(w);
    CHECK(norm_l2(g, ScalarField{curl(g, v).v - ws.v}) < 1e-8 * norm_l2(g, ws));
    CHECK(norm_l2(g, divergence(g, v)) < 1e-8 * norm_h1(g, v));
    CHECK(boundary_trace(g, v).normal.cwiseAbs().maxCoeff() < 1e-9 * norm_l2(g, v));
    CHECK(norm_l2(g, velocity_from_vorticity(g, ws) - v) < 1e-9 * norm_l2(g, v));
    CHECK(b.velocity_l2_sq(w) == doctest::Approx(norm_l2(g, v) * norm_l2(g, v)).epsilon(1e-10));
    // ||grad u||^2 = ||w||^2 - ||u||^2 on the unit circle, so ||u||_1 <= ||w||.
    const double h1 = b.velocity_h1_sq(w), bnd = inner_boundary(g, v, v);
    CHECK(h1 + bnd == doctest::Approx(w.squaredNorm()).epsilon(1e-8));
    CHECK(h1 <= w.squaredNorm());
  }
}

TEST_CASE("vorticity drift terms") {
  SimConfig cfg = small_config();
  cfg.noise.enabled = false;
  cfg.nonlinear = false;
  const VorticitySystem heat(cfg, shared_system().basis_ptr(), shared_system().noise());
  const Eigen::VectorXd d = heat.drift(Eigen::VectorXd::Unit(8, 2));
  const double s = heat.basis().mode(2).sigma;
  CHECK(d[2] == doctest::Approx(-cfg.nu * s * s).epsilon(1e-15));
  CHECK(d.norm() == doctest::Approx(std::abs(d[2])).epsilon(1e-15));

  const VorticitySystem& sys = shared_system();
  for (int k = 0; k < 5; ++k) {
    const Eigen::VectorXd w = generic(8, k);
    const Eigen::VectorXd nl = sys.nonlinear(w);
    CHECK(std::abs(nl.dot(w)) < 1e-8 * nl.norm() * w.norm());
    CHECK((nl - sys.nonlinear_grid(w)).norm() < 1e-8 * nl.norm());
    for (int i = 0; i < sys.noise_modes(); ++i) {
      const Eigen::MatrixXd& L = sys.noise_matrix(i);
      const Eigen::VectorXd lw = L * w;
      CHECK(std::abs(w.dot(L * lw) + lw.squaredNorm()) < 1e-7 * lw.squaredNorm());
    }
  }
  CHECK(sys.drift(Eigen::VectorXd::Zero(8)).isZero(0.0));
  CHECK(sys.diffusion(Eigen::VectorXd::Zero(8)).isZero(0.0));
}

TEST_CASE("second-order transport identity on the grid") {
  const VorticitySystem& sys = shared_system();
  const DiskGrid& g = sys.basis().grid();
  const ScalarField w = sys.basis().synthesize(generic(8, 0.5));
  for (const auto& xi : sys.noise().fields()) {
    const VectorField x = xi.sample(g).value;
    const ScalarField lw = advect_scalar(g, x, w);
    const ScalarField llw = advect_scalar(g, x, lw);
    const double n2 = inner_l2(g, lw, lw);
    CHECK(std::abs(inner_l2(g, llw, w) + n2) < 1e-7 * n2);
  }
}

TEST_CASE("system construction") {
  SimConfig cfg = small_config();
  cfg.alpha = 3.0;
  CHECK_THROWS_AS(VorticitySystem{cfg}, std::invalid_argument);
  const Eigen::VectorXd w0 = initial_vorticity(small_config().ic, shared_system().basis());
  CHECK(w0[0] == doctest::Approx(-shared_system().basis().mode(0).sigma).epsilon(1e-15));
  CHECK_THROWS_AS(shared_system().initial_state(Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("heat decay of a single mode") {
  SimConfig cfg = small_config();
  cfg.noise.enabled = false;
  cfg.nonlinear = false;
  cfg.t_end = 1.0;
  const VorticitySystem sys(cfg, shared_system().basis_ptr(), shared_system().noise());
  const double s2 = std::pow(sys.basis().mode(0).sigma, 2);
  double err[2];
  for (int level = 0; level < 2; ++level) {
    const double dt = cfg.dt / (1 << level);
    VorticityState st = sys.initial_state(Eigen::VectorXd::Unit(8, 0));
    for (int k = 0; k < static_cast<int>(std::lround(cfg.t_end / dt)); ++k)
      st = sys.step(st, Eigen::VectorXd::Zero(0), dt);
    err[level] = std::abs(st.w[0] - std::exp(-cfg.nu * s2 * cfg.t_end));
  }
  CHECK(std::log2(err[0] / err[1]) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("pure transport conserves enstrophy to first order") {
  SimConfig cfg = small_config();
  cfg.dt = 1e-3;
  cfg.t_end = 0.5;
  cfg.ic.type = InitialCondition::Type::Random;
  const RefinementStudy st = transport_study(cfg, 4, 3);
  for (double r : st.ratios()) CHECK(r == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("enstrophy balance converges at first order") {
  // The eight-mode system is pre-asymptotic here, so use the default resolution.
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.5;
  cfg.ic.type = InitialCondition::Type::Random;
  for (std::uint64_t seed : {1, 2}) {
    const RefinementStudy st = enstrophy_study(cfg, seed, 3);
    for (double r : st.ratios()) {
      CHECK(r >= 1.6);
      CHECK(r <= 2.4);
    }
  }
}

TEST_CASE("velocity and vorticity forms agree at alpha = 2") {
  SimConfig cfg = small_config();
  cfg.ic.type = InitialCondition::Type::Random;
  CHECK(cross_formulation_gap(cfg, 3) < 1e-10);
}

TEST_CASE("trajectory output") {
  SimConfig cfg = small_config();
  const VorticitySystem& sys = shared_system();
  const Eigen::VectorXd w0 = initial_vorticity(cfg.ic, sys.basis());
  const VorticityOutput a = sys.run(w0, path_for(cfg, 2), true), b = sys.run(w0, path_for(cfg, 2));
  REQUIRE(a.rows.size() == static_cast<std::size_t>(cfg.n_steps() + 1));
  CHECK(a.history.size() == a.rows.size());
  CHECK(b.history.empty());
  CHECK(a.final_state.w == b.final_state.w);
  std::ostringstream os;
  write_vorticity_csv(os, a);
  CHECK(os.str().rfind("t,enstrophy,grad_w_sq,l2_sq,h1_sq,enstrophy_defect\n", 0) == 0);
  CHECK(a.rows.front().enstrophy_defect == 0.0);
  CHECK_THROWS_AS(sys.run(w0, sample_path(1, 4, 0.01, 1)), std::invalid_argument);
}

TEST_CASE("viscosity sweep") {
  SimConfig cfg = small_config();
  const auto same = viscosity_sweep(cfg, {0.05, 0.05});
  REQUIRE(same.size() == 2);
  CHECK(same[0].sup_l2_diff_to_next == 0.0);
  CHECK(std::isnan(same[1].sup_l2_diff_to_next));
  CHECK(same[0].sup_h1_norm == same[1].sup_h1_norm);

  const auto sweep = viscosity_sweep(cfg, {0.1, 0.05, 0.025});
  CHECK(sweep[0].sup_l2_diff_to_next > 0.0);
  for (const auto& e : sweep) CHECK(std::isfinite(e.enstrophy_defect_T));
  std::ostringstream os;
  write_sweep_csv(os, sweep);
  CHECK(os.str().rfind("nu,sup_l2_diff_to_next,sup_h1_norm,enstrophy_defect_T\n", 0) == 0);

  CHECK_THROWS_AS(viscosity_sweep(cfg, {0.05, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(viscosity_sweep(cfg, {}), std::invalid_argument);
  CHECK_THROWS_AS(viscosity_sweep(cfg, {0.1, 0.0}), std::invalid_argument);
  cfg.alpha = 1.5;
  CHECK_THROWS_AS(viscosity_sweep(cfg, {0.1}), std::invalid_argument);
}
