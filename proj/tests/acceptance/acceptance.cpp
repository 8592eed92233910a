// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "sdns/commands.hpp"
#include "sdns/config.hpp"
#include "sdns/disk_basis.hpp"
#include "sdns/galerkin.hpp"
#include "sdns/noise.hpp"
#include "sdns/operators.hpp"
#include "sdns/studies.hpp"
#include "sdns/validation.hpp"
#include "sdns/vorticity.hpp"
#include "sdns_oracle/fd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

using namespace sdns;
namespace fs = std::filesystem;
namespace fd = sdns_oracle;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Accumulates sub-results into one criterion line.
struct Verdict {
  bool pass = true;
  std::ostringstream os;

  void require(bool ok, const std::string& what, double value) {
    pass = pass && ok;
    os << (os.tellp() > 0 ? "; " : "") << what << '=' << value << (ok ? "" : " (!)");
  }
  Outcome done() const { return {pass, os.str()}; }
};

const Check* find(const std::vector<Check>& checks, const std::string& name) {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

void require_check(Verdict& v, const std::vector<Check>& checks, const std::string& name,
                   const std::string& label) {
  const Check* c = find(checks, name);
  if (!c) {
    v.require(false, label + "(missing)", std::numeric_limits<double>::quiet_NaN());
    return;
  }
  v.require(c->pass, label, c->value);
}

std::shared_ptr<const DiskGrid> default_grid() {
  const SimConfig cfg;
  return std::make_shared<const DiskGrid>(cfg.n_r, cfg.n_theta);
}

Outcome basis_correctness() {
  Verdict v;
  for (double alpha : {2.0, 3.0, 5.0}) {
    const BasisSet basis = BasisSet::build(alpha, 16, default_grid());
    const auto checks = basis_checks(basis, ValidationParams{});
    const std::string tag = "a" + std::to_string(static_cast<int>(alpha)) + ".";
    require_check(v, checks, "basis.gram_deviation", tag + "gram");
    require_check(v, checks, "basis.eigen_relation", tag + "eig");
    require_check(v, checks, "basis.slip_residual", tag + "slip");

    std::map<int, std::vector<double>> eigs;
    double worst = 0.0;
    for (const auto& m : basis.modes()) {
      auto& e = eigs[m.n];
      if (static_cast<int>(e.size()) < m.k) e = fd::fd_stokes_eigs(alpha, m.n, 512, m.k);
      worst = static_cast<int>(e.size()) < m.k
                  ? std::numeric_limits<double>::infinity()
                  : std::max(worst, std::abs(m.lambda - e[m.k - 1]) / e[m.k - 1]);
    }
    v.require(worst < 1e-3, tag + "fd_rel", worst);
  }
  return v.done();
}

Outcome operator_identities() {
  Verdict v;
  const SimConfig cfg;
  const NoiseModel noise = build_xi_library(cfg.noise.modes, cfg.noise.decay_rate, cfg.noise.bump);
  for (double alpha : {2.0, 3.0}) {
    const BasisSet basis = BasisSet::build(alpha, cfg.n_modes, default_grid());
    const auto checks = operator_checks(basis, noise, ValidationParams{100, 1});
    const std::string tag = "a" + std::to_string(static_cast<int>(alpha)) + ".";
    for (const char* name :
         {"leray_idempotence", "leray_orthogonality", "curl_of_projection", "greens_defect",
          "trilinear_antisymmetry", "curl_commutation", "projected_square"})
      require_check(v, checks, std::string("operators.") + name, tag + name);
  }
  return v.done();
}

Outcome deterministic_dynamics() {
  Verdict v;
  SimConfig d;
  d.dt = 0.01;
  d.t_end = 1.0;
  d.ic.type = InitialCondition::Type::Mode;
  d.ic.mode = 0;

  d.scheme = Scheme::ItoEuler;
  for (double o : decay_study(d, 4).orders()) v.require(std::abs(o - 1.0) <= 0.3, "euler_order", o);
  d.scheme = Scheme::StratHeun;
  for (double o : decay_study(d, 4).orders()) v.require(std::abs(o - 2.0) <= 0.3, "heun_order", o);

  // Euler is first order in the energy defect, so halving dt halves it.
  d.ic.type = InitialCondition::Type::Random;
  d.scheme = Scheme::ItoEuler;
  for (double r : energy_balance_study(d, 4).ratios())
    v.require(r >= 1.6 && r <= 2.4, "energy_ratio", r);
  return v.done();
}

Outcome enstrophy_identity() {
  struct Job {
    double nu;
    std::uint64_t seed;
    std::vector<double> ratios;
    std::exception_ptr error;
  };
  std::vector<Job> jobs;
  for (double nu : {0.1, 0.01})
    for (std::uint64_t seed = 1; seed <= 5; ++seed) jobs.push_back({nu, seed, {}, nullptr});

  const int workers =
      std::max(1, std::min<int>(static_cast<int>(jobs.size()), std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < jobs.size(); k += workers) {
        try {
          SimConfig cfg;
          cfg.alpha = 2.0;
          cfg.nu = jobs[k].nu;
          cfg.scheme = Scheme::StratHeun;
          cfg.dt = 4e-4;
          cfg.t_end = 1.0;
          cfg.ic.type = InitialCondition::Type::Random;
          jobs[k].ratios = enstrophy_study(cfg, jobs[k].seed, 4).ratios();
        } catch (...) {
          jobs[k].error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();

  Verdict v;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& j : jobs) {
    if (j.error) std::rethrow_exception(j.error);
    for (double r : j.ratios) {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      if (!(r >= 1.6 && r <= 2.4)) v.require(false, "ratio(nu=" + std::to_string(j.nu) + ")", r);
    }
  }
  v.require(lo >= 1.6, "min_ratio", lo);
  v.require(hi <= 2.4, "max_ratio", hi);
  return v.done();
}

Outcome ito_strat() {
  Verdict v;
  SimConfig cfg;
  cfg.dt = 4e-3;
  cfg.t_end = 1.0;
  const RefinementStudy st = ito_strat_study(cfg, cfg.noise.seed, 8, 5);
  v.require(st.fitted_order() >= 0.5, "fitted_order", st.fitted_order());
  v.require(st.errors.back() < st.errors.front(), "finest_over_coarsest",
            st.errors.back() / st.errors.front());
  return v.done();
}

// The default mode start attains its sup at t = 0, so a random start is swept too.
std::vector<std::vector<SweepEntry>> sweeps() {
  const RunConfig rc;
  SimConfig random = rc.sim;
  random.ic.type = InitialCondition::Type::Random;
  return {viscosity_sweep(rc.sim, rc.sweep_nu_list), viscosity_sweep(random, rc.sweep_nu_list)};
}

void uniform_bound(Verdict& v, const std::vector<SweepEntry>& sweep) {
  double hi = 0.0, lo = std::numeric_limits<double>::infinity();
  for (const auto& e : sweep) {
    hi = std::max(hi, e.sup_h1_norm);
    lo = std::min(lo, e.sup_h1_norm);
  }
  v.require(sweep.size() == 4, "entries", static_cast<double>(sweep.size()));
  v.require((hi - lo) / hi < 0.05, "spread", (hi - lo) / hi);
  v.require(true, "sup_h1", hi);
}

void inviscid_trend(Verdict& v, const std::vector<SweepEntry>& sweep) {
  int inversions = 0;
  bool small = true;
  for (std::size_t k = 0; k + 1 < sweep.size(); ++k) {
    v.require(std::isfinite(sweep[k].sup_l2_diff_to_next), "diff", sweep[k].sup_l2_diff_to_next);
    if (k == 0) continue;
    const double rise = sweep[k].sup_l2_diff_to_next / sweep[k - 1].sup_l2_diff_to_next - 1.0;
    if (rise > 0.0) {
      ++inversions;
      small = small && rise <= 0.1;
    }
  }
  v.require(inversions == 0 || (inversions == 1 && small), "inversions", inversions);
}

template <class F>
Outcome over_sweeps(const std::vector<std::vector<SweepEntry>>& all, F&& f) {
  Verdict v;
  for (const auto& s : all) f(v, s);
  return v.done();
}

Outcome galerkin_uniformity() {
  Verdict v;
  SimConfig cfg;
  cfg.ic.type = InitialCondition::Type::Random;
  cfg.ic.bandwidth = 8;
  EnsembleSummary prev;
  for (int n : {8, 16, 32}) {
    cfg.n_modes = n;
    const EnsembleSummary cur = ensemble(cfg, 32);
    if (n > 8) {
      const double growth = cur.mean - prev.mean;
      const double allowed = 2.0 * std::hypot(cur.std_error, prev.std_error);
      v.require(growth <= allowed, "growth_" + std::to_string(n) + "_over_2se",
                growth / allowed);
    }
    v.require(std::isfinite(cur.mean), "mean_" + std::to_string(n), cur.mean);
    prev = cur;
  }
  return v.done();
}

double max_abs(const fd::FdField& f) { return f.cwiseAbs().maxCoeff(); }

Outcome oracle_integrity() {
  Verdict v;
  const auto f = [](double x, double y) { return std::exp(x) * std::sin(2.0 * y) + x * x * x * y; };
  const auto fx = [](double x, double y) { return std::exp(x) * std::sin(2.0 * y) + 3.0 * x * x * y; };
  const auto fy = [](double x, double y) { return 2.0 * std::exp(x) * std::cos(2.0 * y) + x * x * x; };
  auto grad_err = [&](const fd::FdGradient& d, const fd::FdGrid& g, int keep_rows) {
    return std::max((d.dx - fd::fd_sample(g, fx)).topRows(keep_rows).cwiseAbs().maxCoeff(),
                    (d.dy - fd::fd_sample(g, fy)).topRows(keep_rows).cwiseAbs().maxCoeff());
  };

  {
    const fd::FdGrid a(32, 64), b(64, 128);
    const double o = std::log2(grad_err(fd::fd_derivatives(fd::fd_sample(a, f), a), a, a.n_r) /
                               grad_err(fd::fd_derivatives(fd::fd_sample(b, f), b), b, b.n_r));
    v.require(std::abs(o - 4.0) <= 0.3, "derivative_order", o);
  }
  {
    // Rim rows keep the one-sided fourth-order stencil; the interior is sixth order.
    const fd::FdGrid a(24, 48), b(48, 96);
    const double o = std::log2(grad_err(fd::fd_derivatives_richardson(f, a), a, a.n_r - 3) /
                               grad_err(fd::fd_derivatives_richardson(f, b), b, b.n_r - 6));
    v.require(std::abs(o - 6.0) <= 0.3, "richardson_order", o);
  }
  {
    const double s = 2.404825557695773;
    const auto rhs = [s](double x, double y) {
      return -s * s * std::cyl_bessel_j(0.0, s * std::hypot(x, y));
    };
    const auto exact = [s](double x, double y) { return std::cyl_bessel_j(0.0, s * std::hypot(x, y)); };
    double e[2];
    int k = 0;
    for (int n : {32, 64}) {
      const fd::FdGrid g(n, 2 * n);
      e[k++] = max_abs(fd::fd_poisson_dirichlet(fd::fd_sample(g, rhs), g) - fd::fd_sample(g, exact));
    }
    v.require(std::abs(std::log2(e[0] / e[1]) - 2.0) <= 0.3, "poisson_order", std::log2(e[0] / e[1]));
  }
  {
    const double exact = 5.783185962946784;
    const double o = std::log2(std::abs(fd::fd_stokes_eigs(2.0, 0, 64, 1)[0] - exact) /
                               std::abs(fd::fd_stokes_eigs(2.0, 0, 128, 1)[0] - exact));
    v.require(std::abs(o - 2.0) <= 0.3, "stokes_eig_order", o);
  }

  // Certification of the spectral path by the converged oracles.
  {
    const DiskGrid g(32, 32);
    const auto f1 = [](double x, double y) { return std::sin(x + 2.0 * y) + x * y; };
    const auto f2 = [](double x, double y) { return x * x - std::cos(y); };
    Array2 s1(g.n_r(), g.n_theta()), s2(g.n_r(), g.n_theta());
    for (int i = 0; i < g.n_r(); ++i)
      for (int j = 0; j < g.n_theta(); ++j) {
        s1(i, j) = f1(g.x()(i, j), g.y()(i, j));
        s2(i, j) = f2(g.x()(i, j), g.y()(i, j));
      }
    const VectorField in{s1, s2};
    const VectorField p = leray_project(g, in);
    const fd::FdGrid fg(96, 96);
    const auto h = fd::fd_helmholtz_richardson(f1, f2, fg);
    double worst = 0.0;
    for (int i = 0; i < fg.n_r; i += 4)
      for (int j = 0; j < fg.n_theta; j += 4)
        worst = std::max({worst,
                          std::abs(g.interpolate(p.u1, fg.r(i), fg.theta(j)) - h.div_free_1(i, j)),
                          std::abs(g.interpolate(p.u2, fg.r(i), fg.theta(j)) - h.div_free_2(i, j))});
    const double rel = worst / norm_l2(g, in);
    v.require(rel < 1e-5, "leray_vs_oracle", rel);
  }
  {
    const NoiseModel noise = build_xi_library(1, 2.0, BumpParams{});
    const XiField& xi = noise.field(0);
    const auto div = fd::fd_divergence([&](double x, double y) { return xi.value(x, y)[0]; },
                                       [&](double x, double y) { return xi.value(x, y)[1]; },
                                       fd::FdGrid(128, 128));
    v.require(max_abs(div) < 1e-9, "xi_divergence", max_abs(div));
  }
  return v.done();
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

// Every output except the manifests, which record wall time.
std::map<std::string, std::string> outputs(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("manifest_", 0) != 0) out[name] = slurp(e.path());
  }
  return out;
}

Outcome reproducibility() {
  Verdict v;
  const fs::path root = fs::temp_directory_path() / ("sdns_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::ostringstream sink;

  struct Run {
    std::string label, command;
    std::function<void(RunConfig&)> setup;
  };
  const std::vector<Run> runs = {
      {"validate", "validate", [](RunConfig&) {}},
      {"simulate", "simulate", [](RunConfig&) {}},
      {"simulate_paths", "simulate", [](RunConfig& c) { c.paths = 4; }},
      {"simulate_vorticity", "simulate",
       [](RunConfig& c) { c.formulation = Formulation::Vorticity; }},
  };
  for (const auto& r : runs) {
    std::map<std::string, std::string> first;
    for (int rep = 0; rep < 2; ++rep) {
      RunConfig cfg;
      r.setup(cfg);
      cfg.out_dir = (root / (r.label + std::to_string(rep))).string();
      run_command(r.command, cfg, sink);
      const auto files = outputs(cfg.out_dir);
      if (rep == 0) {
        first = files;
      } else {
        v.require(!files.empty() && files == first, r.label + "_files_identical",
                  static_cast<double>(files.size()));
      }
    }
  }
  fs::remove_all(root);
  return v.done();
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<std::vector<SweepEntry>> sweep;
  const std::vector<Criterion> criteria = {
      {"basis correctness", basis_correctness},
      {"operator identities", operator_identities},
      {"deterministic dynamics", deterministic_dynamics},
      {"pathwise enstrophy identity", enstrophy_identity},
      {"ito/stratonovich consistency", ito_strat},
      {"uniform-in-nu bound",
       [&] {
         sweep = sweeps();
         return over_sweeps(sweep, uniform_bound);
       }},
      {"inviscid-limit trend", [&] { return over_sweeps(sweep, inviscid_trend); }},
      {"galerkin stability uniformity", galerkin_uniformity},
      {"oracle integrity", oracle_integrity},
      {"reproducibility", reproducibility},
  };

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s %2zu %-30s [%.1fs] %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].name,
                secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
