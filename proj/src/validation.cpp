#include "sdns/validation.hpp"

#include "sdns/format.hpp"
#include "sdns/operators.hpp"
#include "sdns/studies.hpp"
#include "sdns/vorticity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace sdns {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

Check make(const std::string& name, double value, std::string bound, bool pass) {
  Check c;
  c.name = name;
  c.value = value;
  c.bound = std::move(bound);
  c.pass = pass;
  return c;
}

}  // namespace

Check check_below(const std::string& name, double value, double limit) {
  return make(name, value, "< " + num(limit), std::isfinite(value) && value < limit);
}

Check check_at_least(const std::string& name, double value, double limit) {
  return make(name, value, ">= " + num(limit), std::isfinite(value) && value >= limit);
}

Check check_within(const std::string& name, double value, double lo, double hi) {
  return make(name, value, "in [" + num(lo) + ", " + num(hi) + "]",
              std::isfinite(value) && value >= lo && value <= hi);
}

Check check_report(const std::string& name, double value) {
  Check c = make(name, value, "report", true);
  c.report_only = true;
  return c;
}

Eigen::VectorXd random_coefficients(const BasisSet& basis, std::uint64_t seed, int sample) {
  Eigen::VectorXd c(basis.size());
  for (int k = 0; k < basis.size(); ++k)
    c[k] = keyed_normal(seed, k, static_cast<std::uint64_t>(sample), 11) /
           std::sqrt(basis.mode(k).lambda);
  return c / c.norm();
}

namespace {

constexpr std::uint64_t kFieldStream = 12;

VectorField random_polynomial_field(const DiskGrid& g, std::uint64_t seed, int sample) {
  VectorField f = VectorField::zeros(g);
  int idx = 0;
  for (int a = 0; a <= 3; ++a) {
    for (int b = 0; a + b <= 3; ++b) {
      const Array2 mono = (g.x().array().pow(a) * g.y().array().pow(b)).matrix();
      f.u1 += keyed_normal(seed, idx++, static_cast<std::uint64_t>(sample), kFieldStream) * mono;
      f.u2 += keyed_normal(seed, idx++, static_cast<std::uint64_t>(sample), kFieldStream) * mono;
    }
  }
  return f;
}

// grad of a1 e^x cos 2y + a2 x y^2 + a3 sin(x + 3y), in closed form.
VectorField random_gradient_field(const DiskGrid& g, std::uint64_t seed, int sample) {
  const auto s = static_cast<std::uint64_t>(sample);
  const double a1 = keyed_normal(seed, 0, s, 13), a2 = keyed_normal(seed, 1, s, 13),
               a3 = keyed_normal(seed, 2, s, 13);
  const auto x = g.x().array(), y = g.y().array();
  VectorField f;
  f.u1 = (a1 * x.exp() * (2 * y).cos() + a2 * y * y + a3 * (x + 3 * y).cos()).matrix();
  f.u2 = (-2 * a1 * x.exp() * (2 * y).sin() + 2 * a2 * x * y + 3 * a3 * (x + 3 * y).cos()).matrix();
  return f;
}

double max_abs(const Array2& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace

std::vector<Check> basis_checks(const BasisSet& basis, const ValidationParams& p) {
  const DiskGrid& g = basis.grid();
  const int n = basis.size();
  const double alpha = basis.alpha();
  std::vector<Check> out;

  Eigen::MatrixXd gram(n, n), hgram(n, n);
  std::vector<VectorField> modes;
  for (int k = 0; k < n; ++k) modes.push_back(basis.mode_field(k));
  double eig = 0.0, slip = 0.0, normal = 0.0;
  for (int k = 0; k < n; ++k) {
    gram.col(k) = basis.analyze(modes[k]);
    for (int j = 0; j < n; ++j) hgram(j, k) = inner_H(basis, modes[j], modes[k]);
    const double lam = basis.mode(k).lambda;
    eig = std::max(eig, norm_l2(g, stokes_apply(g, modes[k]) - lam * modes[k]) / lam);
    const BoundaryTrace tr = boundary_trace(g, modes[k]);
    const ScalarField w = curl(g, modes[k]);
    const Eigen::VectorXd wc = boundary_trace(g, w).normal;
    slip = std::max(slip, (wc - (2.0 - alpha) * tr.tangent).cwiseAbs().maxCoeff() / max_abs(w.v));
    normal = std::max(normal, tr.normal.cwiseAbs().maxCoeff());
  }
  out.push_back(check_below("basis.gram_deviation", (gram - Eigen::MatrixXd::Identity(n, n))
                                                        .cwiseAbs()
                                                        .maxCoeff(),
                            1e-8));
  out.push_back(check_below("basis.eigen_relation", eig, 1e-6));
  out.push_back(check_below("basis.slip_residual", slip, 1e-8));
  out.push_back(check_below("basis.normal_trace", normal, 1e-8));

  const Eigen::VectorXd lam = basis.eigenvalues();
  double hdev = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      hdev = std::max(hdev, std::abs(hgram(j, k) - (j == k ? lam[k] : 0.0)) /
                                std::sqrt(lam[j] * lam[k]));
  out.push_back(check_below("basis.H_gram_deviation", hdev, 1e-6));
  out.push_back(make("basis.min_eigenvalue", lam.minCoeff(), "> 0", lam.minCoeff() > 0.0));

  int order_violations = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const Mode &a = basis.mode(j), &b = basis.mode(k);
      if (a.n == b.n && a.parity == b.parity && a.k < b.k && !(a.lambda < b.lambda))
        ++order_violations;
    }
  out.push_back(check_below("basis.eigenvalue_order_violations", order_violations, 0.5));

  // ||(I - P_n) phi|| <= ||phi||_H / sqrt(lambda_n) for phi in a span twice as large.
  const BasisSet wide = BasisSet::build(alpha, 2 * n, basis.grid_ptr());
  double tail = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < std::min(p.samples, 50); ++s) {
    const VectorField phi = wide.synthesize(random_coefficients(wide, p.seed, s));
    const double lhs = norm_l2(g, phi - basis.project(phi));
    const double rhs = std::sqrt(inner_H(basis, phi, phi) / lam[n - 1]);
    tail = std::max(tail, lhs - rhs);
  }
  out.push_back(check_below("basis.tail_bound_excess", tail, 1e-9));

  double grad_coeff = 0.0;
  for (int s = 0; s < std::min(p.samples, 20); ++s) {
    const VectorField f = random_gradient_field(g, p.seed, s);
    grad_coeff = std::max(grad_coeff, basis.analyze(f).cwiseAbs().maxCoeff() / norm_l2(g, f));
  }
  out.push_back(check_below("basis.gradient_coefficients", grad_coeff, 1e-8));
  return out;
}

std::vector<Check> operator_checks(const BasisSet& basis, const NoiseModel& noise,
                                   const ValidationParams& p) {
  const DiskGrid& g = basis.grid();
  const int n = basis.size();
  std::vector<Check> out;

  double idem = 0.0, orth = 0.0, curl_p = 0.0, fixes = 0.0, kills = 0.0, curl_grad = 0.0;
  double antisym = 0.0, stokes = 0.0, lady = 0.0, trace = 0.0, bsym = 0.0;
  double commute = 0.0, square = 0.0;
  std::vector<FieldWithGradient> xis;
  for (const auto& xi : noise.fields()) xis.push_back(xi.sample(g));

  for (int s = 0; s < p.samples; ++s) {
    const Eigen::VectorXd c = random_coefficients(basis, p.seed, s);
    const VectorField u = basis.synthesize(c);
    const VectorField f = u + random_polynomial_field(g, p.seed, s);
    const VectorField pf = leray_project(g, f);
    const double nf = norm_l2(g, f);
    idem = std::max(idem, norm_l2(g, leray_project(g, pf) - pf) / nf);
    orth = std::max(orth, std::abs(inner_l2(g, pf, f - pf)) / (nf * nf));
    const ScalarField cf = curl(g, f);
    curl_p = std::max(curl_p, norm_l2(g, ScalarField{curl(g, pf).v - cf.v}) / norm_l2(g, cf));
    fixes = std::max(fixes, norm_l2(g, leray_project(g, u) - u) / norm_l2(g, u));

    const VectorField grad = random_gradient_field(g, p.seed, s);
    kills = std::max(kills, norm_l2(g, leray_project(g, grad)) / norm_l2(g, grad));
    curl_grad = std::max(curl_grad, norm_l2(g, curl(g, grad)) / norm_h1(g, grad));

    const VectorField phi = basis.synthesize(random_coefficients(basis, p.seed, s + p.samples));
    const VectorField h = basis.synthesize(random_coefficients(basis, p.seed, s + 2 * p.samples));
    antisym = std::max(antisym, nonlinear_antisymmetry_defect(g, phi, u, h) /
                                    (norm_h1(g, phi) * norm_h1(g, u) * norm_h1(g, h)));
    lady = std::max(lady, ladyzhenskaya_ratio(g, phi, u, h));
    trace = std::max(trace, trace_ratio(g, u));

    const VectorField a_grid = stokes_apply(g, u), a_coef = stokes_apply(basis, c);
    stokes = std::max(stokes, norm_l2(g, a_grid - a_coef) / norm_l2(g, a_coef));

    const double curl_h1 = norm_h1(g, curl(g, u));
    for (const auto& xi : xis) {
      commute = std::max(commute, curl_commute_defect(g, xi, u) / curl_h1);
      const VectorField bu = salt_B(g, xi, u);
      const VectorField b2 = leray_project(g, salt_B(g, xi, bu));
      const VectorField pb2 = leray_project(g, salt_B(g, xi, leray_project(g, bu)));
      square = std::max(square, norm_l2(g, b2 - pb2) / norm_l2(g, b2));
      const double sym = 2.0 * inner_l2(g, bu, u);
      const double tff = 2.0 * inner_l2(g, salt_T(g, xi, u), u);
      bsym = std::max(bsym, std::abs(sym - tff) / (norm_l2(g, bu) * norm_l2(g, u)));
    }
  }
  out.push_back(check_below("operators.leray_idempotence", idem, 1e-9));
  out.push_back(check_below("operators.leray_orthogonality", orth, 1e-8));
  out.push_back(check_below("operators.curl_of_projection", curl_p, 1e-7));
  out.push_back(check_below("operators.leray_fixes_span", fixes, 1e-8));
  out.push_back(check_below("operators.leray_of_gradient", kills, 1e-7));
  out.push_back(check_below("operators.curl_of_gradient", curl_grad, 1e-9));
  out.push_back(check_below("operators.trilinear_antisymmetry", antisym, 1e-7));
  out.push_back(check_below("operators.stokes_grid_vs_coefficients", stokes, 1e-6));
  out.push_back(check_below("operators.salt_symmetric_part", bsym, 1e-7));
  out.push_back(check_below("operators.curl_commutation", commute, 1e-5));
  out.push_back(check_below("operators.projected_square", square, 1e-5));
  out.push_back(check_report("operators.ladyzhenskaya_constant", lady));
  out.push_back(check_report("operators.trace_constant", trace));

  const int m = std::min(n, 16);
  double green = 0.0;
  std::vector<VectorField> modes;
  for (int k = 0; k < m; ++k) modes.push_back(basis.mode_field(k));
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      green = std::max(green, greens_defect(g, modes[j], modes[k], basis.alpha()) /
                                  (norm_h1(g, modes[j]) * norm_h1(g, modes[k])));
  out.push_back(check_below("operators.greens_defect", green, 1e-6));
  out.push_back(check_below("operators.greens_defect_a1",
                            greens_defect(g, modes[0], modes[0], basis.alpha()) /
                                basis.mode(0).lambda,
                            1e-7));
  if (m >= 2) {
    const double cancel = std::abs(inner_l2(g, advect(g, modes[0], modes[1]), modes[1])) /
                          (norm_h1(g, modes[0]) * std::pow(norm_h1(g, modes[1]), 2));
    out.push_back(check_below("operators.cancellation_a1_a2", cancel, 1e-8));
    if (!xis.empty())
      out.push_back(check_below("operators.curl_commutation_a2",
                                curl_commute_defect(g, xis[0], modes[1]) /
                                    norm_h1(g, curl(g, modes[1])),
                                1e-5));
  }
  return out;
}

std::vector<Check> noise_checks(const NoiseModel& noise, const DiskGrid& g,
                                const ValidationParams& p) {
  std::vector<Check> out;
  double div = 0.0, outside = 0.0;
  for (const auto& xi : noise.fields()) {
    const FieldWithGradient s = xi.sample(g);
    const Array2 d = s.grad.d1_f1 + s.grad.d2_f2;
    const double scale = std::max({max_abs(s.grad.d1_f1), max_abs(s.grad.d2_f1),
                                   max_abs(s.grad.d1_f2), max_abs(s.grad.d2_f2)});
    div = std::max(div, max_abs(d) / scale);
    for (int j = 0; j < 360; ++j) {
      const double th = 2.0 * M_PI * j / 360.0;
      for (double r : {xi.support_radius() * (1.0 + 1e-9), 0.5 * (1.0 + xi.support_radius()), 1.0}) {
        const Eigen::Vector2d v = xi.value(r * std::cos(th), r * std::sin(th));
        outside = std::max(outside, v.cwiseAbs().maxCoeff());
      }
    }
  }
  out.push_back(check_below("noise.divergence", div, 1e-12));
  out.push_back(make("noise.outside_support", outside, "== 0", outside == 0.0));

  const auto& sums = noise.summability_partial_sums();
  bool decreasing = true;
  for (std::size_t i = 2; i < sums.size(); ++i)
    decreasing = decreasing && (sums[i] - sums[i - 1]) < (sums[i - 1] - sums[i - 2]);
  out.push_back(make("noise.summability", noise.summability(), "finite, shrinking increments",
                     std::isfinite(noise.summability()) && decreasing));

  const double dt = 1e-3;
  const BrownianPath a = sample_path(p.seed, 12500, dt, 8), b = sample_path(p.seed, 12500, dt, 8);
  out.push_back(make("noise.path_determinism", (a.dW - b.dW).cwiseAbs().maxCoeff(), "== 0",
                     a.dW == b.dW));
  const double var = a.dW.squaredNorm() / static_cast<double>(a.dW.size());
  out.push_back(check_below("noise.increment_variance_error", std::abs(var / dt - 1.0), 0.03));
  const BrownianPath fine = refine(a);
  double bridge = 0.0;
  double mid = 0.0;
  for (int s = 0; s < a.n_steps(); ++s) {
    const Eigen::RowVectorXd sum = fine.dW.row(2 * s) + fine.dW.row(2 * s + 1);
    bridge = std::max(bridge, (sum - a.dW.row(s)).cwiseAbs().maxCoeff());
    mid += (fine.dW.row(2 * s) - 0.5 * a.dW.row(s)).squaredNorm();
  }
  mid /= static_cast<double>(a.dW.size());
  out.push_back(make("noise.bridge_consistency", bridge, "== 0", bridge == 0.0));
  out.push_back(check_below("noise.bridge_midpoint_variance_error", std::abs(mid / (dt / 4) - 1.0),
                            0.03));
  return out;
}

std::vector<Check> galerkin_checks(const SimConfig& cfg, const ValidationParams& p) {
  std::vector<Check> out;
  const GalerkinSystem sys(cfg);
  const BasisSet& basis = sys.basis();

  double anti = 0.0, route = 0.0, diff_bound = 0.0;
  for (int s = 0; s < p.samples; ++s) {
    const Eigen::VectorXd c = random_coefficients(basis, p.seed, s);
    const Eigen::VectorXd nl = sys.nonlinear(c), grid = sys.nonlinear_grid(c);
    anti = std::max(anti, std::abs(nl.dot(c)) / (nl.norm() * c.norm()));
    route = std::max(route, (nl - grid).norm() / grid.norm());
    if (sys.noise_modes() > 0)
      diff_bound = std::max(diff_bound, sys.diffusion(c).colwise().norm().maxCoeff() /
                                            std::sqrt(basis.norm_h1_sq(c)));
  }
  out.push_back(check_below("galerkin.drift_antisymmetry", anti, 1e-8));
  out.push_back(check_below("galerkin.tensor_vs_grid_nonlinear", route, 1e-8));
  if (sys.noise_modes() > 0) out.push_back(check_report("galerkin.diffusion_h1_ratio", diff_bound));

  SimConfig d = cfg;
  d.dt = 0.01;
  d.t_end = 1.0;
  d.integrating_factor = false;
  d.ic.type = InitialCondition::Type::Mode;
  d.ic.mode = 0;
  d.ic.amplitude = 1.0;
  auto worst_order = [](const RefinementStudy& st, double target) {
    double w = target;
    for (double o : st.orders())
      if (!(std::abs(o - target) <= std::abs(w - target))) w = o;
    return w;
  };
  d.scheme = Scheme::ItoEuler;
  out.push_back(check_within("galerkin.decay_order_euler", worst_order(decay_study(d, 4), 1.0),
                             0.7, 1.3));
  d.scheme = Scheme::StratHeun;
  out.push_back(check_within("galerkin.decay_order_heun", worst_order(decay_study(d, 4), 2.0),
                             1.7, 2.3));

  d.ic.type = InitialCondition::Type::Random;
  d.scheme = Scheme::ItoEuler;
  const auto eb = energy_balance_study(d, 4).ratios();
  double worst = 2.0;
  for (double r : eb)
    if (!(std::abs(r - 2.0) <= std::abs(worst - 2.0))) worst = r;
  out.push_back(check_within("galerkin.energy_balance_ratio_euler", worst, 1.6, 2.4));
  d.scheme = Scheme::StratHeun;
  const auto eh = energy_balance_study(d, 4).ratios();
  out.push_back(check_at_least("galerkin.energy_balance_ratio_heun",
                               *std::min_element(eh.begin(), eh.end()), 1.6));

  if (cfg.noise.enabled) {
    SimConfig q = cfg;
    q.dt = 4e-3;
    q.t_end = 0.5;
    q.integrating_factor = false;
    out.push_back(check_at_least("galerkin.ito_strat_order",
                                 ito_strat_study(q, p.seed, 4, 4).fitted_order(), 0.5));
  }

  SimConfig h = cfg;
  h.hitting_M = 1.01;
  h.ic.type = InitialCondition::Type::Random;
  h.ic.amplitude = 1.0;
  h.ic.h1_norm = 0.0;
  const GalerkinSystem hsys(h, sys.basis_ptr(), sys.noise());
  const TrajectoryOutput hit = hsys.run(initial_coefficients(h.ic, basis),
                                        path_for(h, h.noise.seed));
  const bool frozen = hit.hit_time.has_value() && hit.rows.back().hit &&
                      static_cast<int>(hit.rows.size()) == hit.final_state.steps + 1 &&
                      std::count_if(hit.rows.begin(), hit.rows.end(),
                                    [](const TrajectoryRow& r) { return r.hit; }) == 1;
  out.push_back(make("galerkin.hitting_time", hit.hit_time.value_or(-1.0),
                     "recorded once, run stopped", frozen));

  SimConfig e = cfg;
  e.t_end = std::min(cfg.t_end, 0.5);
  e.ic.type = InitialCondition::Type::Random;
  e.ic.bandwidth = 8;
  e.ic.amplitude = 1.0;
  e.ic.h1_norm = 0.0;
  double growth = -std::numeric_limits<double>::infinity();
  EnsembleSummary prev;
  for (int nm : {8, 16, 32}) {
    e.n_modes = nm;
    const EnsembleSummary cur = ensemble(e, 8);
    if (nm > 8) {
      const double se = 2.0 * std::hypot(prev.std_error, cur.std_error);
      growth = std::max(growth, (cur.mean - prev.mean) - se);
    }
    prev = cur;
  }
  out.push_back(check_below("galerkin.ensemble_growth_beyond_2se", growth, 1e-12));
  return out;
}

std::vector<Check> vorticity_checks(const SimConfig& cfg_in, const std::vector<double>& nu_list,
                                    const ValidationParams& p) {
  std::vector<Check> out;
  SimConfig cfg = cfg_in;
  cfg.alpha = 2.0;
  const VorticitySystem sys(cfg);
  const DirichletBasis& basis = sys.basis();
  const DiskGrid& g = basis.grid();
  const Eigen::VectorXd sigma = basis.sigmas();

  double lu = 0.0, coef = 0.0, l2 = 0.0, bs = 0.0, bs_basis = 0.0, trace = 0.0;
  double ratio_max = 0.0, ratio_min = std::numeric_limits<double>::infinity();
  std::vector<VectorField> xis;
  for (const auto& xi : sys.noise().fields()) xis.push_back(xi.sample(g).value);
  for (int s = 0; s < p.samples; ++s) {
    Eigen::VectorXd w(basis.size());
    for (int k = 0; k < basis.size(); ++k)
      w[k] = keyed_normal(p.seed, k, static_cast<std::uint64_t>(s), 14) / sigma[k];
    w /= w.norm();
    const ScalarField ws = basis.synthesize(w);
    const VectorField u = basis.velocity(w);
    const ScalarField adv = advect_scalar(g, u, ws);
    lu = std::max(lu, std::abs(inner_l2(g, adv, ws)) / (norm_l2(g, adv) * norm_l2(g, ws)));
    const Eigen::VectorXd nl = sys.nonlinear(w);
    coef = std::max(coef, std::abs(nl.dot(w)) / (nl.norm() * w.norm()));
    for (const auto& xi : xis) {
      const ScalarField once = advect_scalar(g, xi, ws);
      const ScalarField twice = advect_scalar(g, xi, once);
      const double n2 = inner_l2(g, once, once);
      l2 = std::max(l2, std::abs(inner_l2(g, twice, ws) + n2) / n2);
    }
    const VectorField ub = velocity_from_vorticity(g, ws);
    bs = std::max(bs, norm_l2(g, ScalarField{curl(g, ub).v - ws.v}) / norm_l2(g, ws));
    bs_basis = std::max(bs_basis, norm_l2(g, ub - u) / norm_l2(g, u));
    trace = std::max(trace, g.boundary_values(ws.v).cwiseAbs().maxCoeff() / max_abs(ws.v));
    const double ratio = norm_h1(g, u) / norm_l2(g, ws);
    ratio_max = std::max(ratio_max, ratio);
    ratio_min = std::min(ratio_min, ratio);
  }
  out.push_back(check_below("vorticity.advection_antisymmetry", lu, 1e-8));
  out.push_back(check_below("vorticity.nonlinear_antisymmetry", coef, 1e-8));
  out.push_back(check_below("vorticity.transport_square_identity", l2, 1e-7));
  out.push_back(check_below("vorticity.biot_savart_curl", bs, 1e-8));
  out.push_back(check_below("vorticity.biot_savart_vs_basis", bs_basis, 1e-8));
  out.push_back(check_below("vorticity.boundary_trace", trace, 1e-9));
  out.push_back(check_below("vorticity.velocity_gradient_constant", ratio_max, 1e3));
  out.push_back(check_report("vorticity.velocity_gradient_constant_min", ratio_min));

  SimConfig t = cfg;
  t.dt = 0.01;
  t.t_end = 0.5;
  t.ic.type = InitialCondition::Type::Random;
  t.ic.amplitude = 1.0;
  t.ic.h1_norm = 0.0;
  t.ic.bandwidth = 0;
  t.scheme = Scheme::StratHeun;
  if (cfg.noise.enabled) {
    t.dt = 1e-3;
    const auto tr = transport_study(t, p.seed, 4).ratios();
    out.push_back(check_at_least("vorticity.transport_norm_defect_ratio",
                                 *std::min_element(tr.begin(), tr.end()), 1.6));
  }
  t.dt = 1e-3;
  const auto en = enstrophy_study(t, p.seed, 3).ratios();
  double worst = 2.0;
  for (double r : en)
    if (!(std::abs(r - 2.0) <= std::abs(worst - 2.0))) worst = r;
  out.push_back(check_within("vorticity.enstrophy_defect_ratio", worst, 1.6, 2.4));
  out.push_back(check_below("vorticity.cross_formulation_gap", cross_formulation_gap(cfg, p.seed),
                            1e-8));

  const auto sweep = viscosity_sweep(cfg, nu_list);
  double hi = 0.0, lo = std::numeric_limits<double>::infinity();
  for (const auto& e : sweep) {
    hi = std::max(hi, e.sup_h1_norm);
    lo = std::min(lo, e.sup_h1_norm);
  }
  out.push_back(check_below("sweep.sup_h1_spread", (hi - lo) / hi, 0.05));
  if (sweep.size() >= 3) {
    int inversions = 0;
    double worst_rise = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 2 < sweep.size(); ++k) {
      const double rise = sweep[k + 1].sup_l2_diff_to_next / sweep[k].sup_l2_diff_to_next - 1.0;
      worst_rise = std::max(worst_rise, rise);
      if (rise > 0.0) ++inversions;
    }
    out.push_back(make("sweep.l2_difference_max_rise", worst_rise,
                       "< 0, or one rise <= 0.1",
                       inversions == 0 || (inversions == 1 && worst_rise <= 0.1)));
  }
  return out;
}

std::vector<Check> run_validation(const SimConfig& cfg, const std::vector<double>& nu_list,
                                  const ValidationParams& p) {
  cfg.validate();
  const auto grid = std::make_shared<const DiskGrid>(cfg.n_r, cfg.n_theta);
  const BasisSet basis = BasisSet::build(cfg.alpha, cfg.n_modes, grid);
  const NoiseModel noise = build_xi_library(cfg.noise.modes, cfg.noise.decay_rate, cfg.noise.bump);
  std::vector<Check> all;
  for (auto&& group : {basis_checks(basis, p), operator_checks(basis, noise, p),
                       noise_checks(noise, *grid, p), galerkin_checks(cfg, p),
                       vorticity_checks(cfg, nu_list, p)})
    all.insert(all.end(), group.begin(), group.end());
  return all;
}

void write_validation_report(std::ostream& os, const std::vector<Check>& checks) {
  int failed = 0;
  for (const auto& c : checks) {
    const char* status = c.report_only ? "INFO" : (c.pass ? "PASS" : "FAIL");
    if (!c.pass) ++failed;
    char name[48];
    std::snprintf(name, sizeof name, "%-44s", c.name.c_str());
    os << status << ' ' << name << ' ' << fmt17(c.value) << "  (" << c.bound << ")\n";
  }
  os << checks.size() << " checks, " << failed << " failed\n";
}

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

}  // namespace sdns
