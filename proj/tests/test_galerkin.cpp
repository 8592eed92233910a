#include "doctest.h"

#include "sdns/galerkin.hpp"
#include "sdns/studies.hpp"

#include <cmath>
#include <limits>
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

const GalerkinSystem& shared_system() {
  static const GalerkinSystem sys(small_config());
  return sys;
}

Eigen::VectorXd generic(int n) {
  Eigen::VectorXd c(n);
  for (int k = 0; k < n; ++k) c[k] = std::sin(0.7 + 1.3 * k) / (1.0 + k);
  return c;
}

}  // namespace

TEST_CASE("config validation names the offending key") {
  const auto fails_with = [](SimConfig c, const std::string& key) {
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      return std::string(e.what()).rfind(key, 0) == 0;
    }
    return false;
  };
  SimConfig c = small_config();
  CHECK_NOTHROW(c.validate());
  c.dt = 0.0;
  CHECK(fails_with(c, "sim.dt"));
  c = small_config();
  c.t_end = 0.001;
  CHECK(fails_with(c, "sim.t_end"));
  c = small_config();
  c.hitting_M = 1.0;
  CHECK(fails_with(c, "sim.hitting_M"));
  c = small_config();
  c.n_modes = 0;
  CHECK(fails_with(c, "sim.n_modes"));
  c = small_config();
  c.nu = -0.1;
  CHECK(fails_with(c, "sim.nu"));
  c = small_config();
  c.ic.mode = 8;
  CHECK(fails_with(c, "sim.ic.mode"));
  c = small_config();
  c.noise.bump.radius = 0.95;
  CHECK(fails_with(c, "noise.bump.radius"));
  CHECK(small_config().n_steps() == 20);
}

TEST_CASE("scheme names") {
  CHECK(scheme_from_string(to_string(Scheme::ItoEuler)) == Scheme::ItoEuler);
  CHECK(scheme_from_string("strat-heun") == Scheme::StratHeun);
  CHECK_THROWS_AS(scheme_from_string("rk4"), std::invalid_argument);
  CHECK(ito_corrector_from_string("full") == ItoCorrector::Full);
  CHECK_THROWS_AS(ito_corrector_from_string("none"), std::invalid_argument);
}

TEST_CASE("initial conditions") {
  const BasisSet& b = shared_system().basis();
  InitialCondition ic;
  ic.mode = 2;
  ic.amplitude = 0.5;
  CHECK(initial_coefficients(ic, b) == 0.5 * Eigen::VectorXd::Unit(8, 2));

  ic.type = InitialCondition::Type::Random;
  ic.amplitude = 2.0;
  ic.bandwidth = 4;
  const Eigen::VectorXd r = initial_coefficients(ic, b);
  CHECK(r.norm() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r.tail(4).isZero(0.0));
  CHECK(r == initial_coefficients(ic, b));
  ic.h1_norm = 3.0;
  CHECK(std::sqrt(b.norm_h1_sq(initial_coefficients(ic, b))) == doctest::Approx(3.0).epsilon(1e-12));

  ic.type = InitialCondition::Type::Coeffs;
  ic.coeffs = {1.0, -2.0};
  const Eigen::VectorXd k = initial_coefficients(ic, b);
  CHECK(k[1] == -2.0);
  CHECK(k.tail(6).isZero(0.0));
  ic.coeffs.assign(9, 1.0);
  CHECK_THROWS_AS(initial_coefficients(ic, b), std::invalid_argument);
}

TEST_CASE("drift and diffusion vanish at zero") {
  const GalerkinSystem& sys = shared_system();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(8);
  CHECK(sys.drift(zero).isZero(0.0));
  CHECK(sys.diffusion(zero).isZero(0.0));
  CHECK(sys.diffusion(zero).cols() == 3);

  SimConfig quiet = small_config();
  quiet.noise.bump.amplitude = 0.0;
  const GalerkinSystem silent(quiet, sys.basis_ptr(),
                              build_xi_library(3, 2.0, quiet.noise.bump));
  CHECK(silent.diffusion(generic(8)).isZero(0.0));
}

TEST_CASE("linear drift is diagonal Stokes decay") {
  SimConfig cfg = small_config();
  cfg.noise.enabled = false;
  cfg.nonlinear = false;
  const GalerkinSystem sys(cfg, shared_system().basis_ptr(), shared_system().noise());
  CHECK(sys.noise_modes() == 0);
  const Eigen::VectorXd d = sys.drift(Eigen::VectorXd::Unit(8, 0));
  CHECK(d[0] == doctest::Approx(-cfg.nu * sys.basis().mode(0).lambda).epsilon(1e-15));
  CHECK(d.tail(7).isZero(0.0));
}

TEST_CASE("nonlinear term conserves energy and matches the grid route") {
  const GalerkinSystem& sys = shared_system();
  for (int s = 0; s < 5; ++s) {
    Eigen::VectorXd c = generic(8);
    c = c.cwiseProduct(Eigen::VectorXd::LinSpaced(8, 1.0 + s, -1.0));
    const Eigen::VectorXd nl = sys.nonlinear(c), grid = sys.nonlinear_grid(c);
    CHECK(std::abs(nl.dot(c)) < 1e-8 * nl.norm() * c.norm());
    CHECK((nl - grid).norm() < 1e-8 * grid.norm());
  }
  CHECK_THROWS_AS(sys.nonlinear(Eigen::VectorXd::Zero(7)), std::invalid_argument);
}

TEST_CASE("Ito corrector is half the sum of squared noise matrices") {
  const GalerkinSystem& sys = shared_system();
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(8, 8);
  for (int i = 0; i < sys.noise_modes(); ++i) expected += 0.5 * sys.noise_matrix(i) * sys.noise_matrix(i);
  CHECK((sys.ito_corrector_matrix() - expected).norm() < 1e-14 * expected.norm());
  const Eigen::VectorXd c = generic(8);
  CHECK((sys.diffusion(c).col(0) + sys.noise_matrix(0) * c).norm() == 0.0);
}

TEST_CASE("mode decay converges at the scheme order") {
  SimConfig cfg = small_config();
  cfg.t_end = 1.0;
  cfg.scheme = Scheme::ItoEuler;
  for (double o : decay_study(cfg, 4).orders()) CHECK(o == doctest::Approx(1.0).epsilon(0.3));
  cfg.scheme = Scheme::StratHeun;
  for (double o : decay_study(cfg, 4).orders()) CHECK(o == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("integrating factor is exact for linear decay") {
  SimConfig cfg = small_config();
  cfg.noise.enabled = false;
  cfg.nonlinear = false;
  cfg.integrating_factor = true;
  cfg.ic.mode = 3;
  for (Scheme s : {Scheme::ItoEuler, Scheme::StratHeun}) {
    cfg.scheme = s;
    const TrajectoryOutput out = run_trajectory(cfg);
    const double lam = GalerkinSystem(cfg).basis().mode(3).lambda;
    CHECK(out.final_state.c[3] == doctest::Approx(std::exp(-cfg.nu * lam * cfg.t_end)).epsilon(1e-12));
  }
}

TEST_CASE("zero initial state stays at rest") {
  SimConfig cfg = small_config();
  cfg.ic.type = InitialCondition::Type::Coeffs;
  cfg.ic.coeffs = {0.0};
  const TrajectoryOutput out = run_trajectory(cfg);
  CHECK(out.final_state.c.isZero(0.0));
  for (const auto& r : out.rows) CHECK(r.l2_sq == 0.0);
}

TEST_CASE("noise-off run is the deterministic Galerkin recursion") {
  SimConfig cfg = small_config();
  cfg.noise.enabled = false;
  cfg.ic.type = InitialCondition::Type::Random;
  const GalerkinSystem sys(cfg, shared_system().basis_ptr(), shared_system().noise());
  const Eigen::VectorXd c0 = initial_coefficients(cfg.ic, sys.basis());
  const TrajectoryOutput out = sys.run(c0, path_for(cfg, 1));
  Eigen::VectorXd c = c0;
  for (int k = 0; k < cfg.n_steps(); ++k) {
    const Eigen::VectorXd f0 = sys.drift(c), pred = c + cfg.dt * f0;
    c = c + 0.5 * cfg.dt * (f0 + sys.drift(pred));
  }
  CHECK(out.final_state.c == c);
}

TEST_CASE("trajectory output and determinism") {
  SimConfig cfg = small_config();
  cfg.ic.type = InitialCondition::Type::Random;
  const GalerkinSystem& sys = shared_system();
  const Eigen::VectorXd c0 = initial_coefficients(cfg.ic, sys.basis());
  const TrajectoryOutput a = sys.run(c0, path_for(cfg, 5)), b = sys.run(c0, path_for(cfg, 5));
  REQUIRE(a.rows.size() == static_cast<std::size_t>(cfg.n_steps() + 1));
  CHECK_FALSE(a.hit_time.has_value());
  CHECK(a.final_state.t == doctest::Approx(cfg.t_end));
  std::ostringstream sa, sb;
  write_trajectory_csv(sa, a);
  write_trajectory_csv(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind("t,l2_sq,h1_sq,H_sq,energy_defect,hit_flag\n", 0) == 0);
  CHECK(a.final_state.c != sys.run(c0, path_for(cfg, 6)).final_state.c);

  double sup = 0.0, dissipation = 0.0;
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    sup = std::max(sup, a.rows[k].l2_sq);
    if (k > 0) {
      dissipation += 0.5 * cfg.dt * (a.rows[k - 1].h1_sq + a.rows[k].h1_sq);
      CHECK(a.rows[k].antisymmetry < 1e-8);
    }
  }
  CHECK(a.final_state.ledger.sup_l2_sq == doctest::Approx(sup).epsilon(1e-14));
  CHECK(a.stopped_functional == doctest::Approx(sup + cfg.nu * dissipation).epsilon(1e-12));
  CHECK_THROWS_AS(sys.run(c0, sample_path(1, 10, 0.01, 2)), std::invalid_argument);
}

TEST_CASE("hitting monitor freezes the state at the first crossing") {
  SimConfig cfg = small_config();
  cfg.hitting_M = 1.001;
  cfg.nu = 0.0;
  cfg.ic.amplitude = 1.0;
  cfg.ic.mode = 5;
  const GalerkinSystem sys(cfg, shared_system().basis_ptr(), shared_system().noise());
  const TrajectoryOutput out = sys.run(initial_coefficients(cfg.ic, sys.basis()), path_for(cfg, 3));
  REQUIRE(out.hit_time.has_value());
  CHECK(out.rows.back().hit);
  CHECK(out.rows.size() == static_cast<std::size_t>(out.final_state.steps + 1));
  for (std::size_t k = 0; k + 1 < out.rows.size(); ++k) CHECK_FALSE(out.rows[k].hit);
  const SolverState again = sys.step(out.final_state, Eigen::VectorXd::Ones(3), 0.1);
  CHECK(again.c == out.final_state.c);
  CHECK(*again.hit == *out.hit_time);
}

TEST_CASE("blow-up is reported") {
  SimConfig cfg = small_config();
  cfg.noise.enabled = false;
  cfg.nonlinear = false;
  cfg.scheme = Scheme::ItoEuler;
  cfg.nu = 1.0;
  cfg.dt = 10.0;
  cfg.t_end = 5000.0;
  cfg.hitting_M = std::numeric_limits<double>::infinity();
  cfg.ic.mode = 7;
  CHECK_THROWS_AS(run_trajectory(cfg), BlowUpError);
}

TEST_CASE("ensemble summary") {
  SimConfig cfg = small_config();
  cfg.ic.type = InitialCondition::Type::Random;
  const EnsembleSummary e = ensemble(shared_system(), initial_coefficients(cfg.ic, shared_system().basis()), 4);
  REQUIRE(e.functionals.size() == 4);
  double mean = 0.0;
  for (double f : e.functionals) mean += f / 4;
  CHECK(e.mean == doctest::Approx(mean).epsilon(1e-14));
  CHECK(e.max >= e.mean);
  CHECK(e.std_error > 0.0);
  const Eigen::VectorXd c0 = initial_coefficients(cfg.ic, shared_system().basis());
  CHECK(e.functionals[2] ==
        shared_system().run(c0, path_for(shared_system().config(), shared_system().config().noise.seed ^ 2)).stopped_functional);
  CHECK_THROWS_AS(ensemble(shared_system(), c0, 0), std::invalid_argument);
}

TEST_CASE("Ito and Stratonovich schemes converge to each other") {
  SimConfig cfg = small_config();
  cfg.dt = 4e-3;
  cfg.t_end = 0.2;
  cfg.ic.type = InitialCondition::Type::Random;
  const RefinementStudy st = ito_strat_study(cfg, 9, 4, 4);
  MESSAGE("fitted order " << st.fitted_order());
  CHECK(st.fitted_order() >= 0.5);
}
