#include "sdns/operators.hpp"

#include <cmath>

namespace sdns {

namespace {

Array2 cw(const Array2& a, const Array2& b) { return a.cwiseProduct(b); }

}  // namespace

VectorGradient gradient(const DiskGrid& g, const VectorField& f) {
  require_on_grid(g, f, "gradient");
  return {g.d_x(f.u1), g.d_y(f.u1), g.d_x(f.u2), g.d_y(f.u2)};
}

FieldWithGradient with_spectral_gradient(const DiskGrid& g, const VectorField& f) {
  return {f, gradient(g, f)};
}

VectorField advect(const DiskGrid& g, const VectorField& phi, const VectorGradient& df) {
  require_on_grid(g, phi, "advect");
  VectorField out;
  out.u1 = g.dealiased_product(phi.u1, df.d1_f1) + g.dealiased_product(phi.u2, df.d2_f1);
  out.u2 = g.dealiased_product(phi.u1, df.d1_f2) + g.dealiased_product(phi.u2, df.d2_f2);
  return out;
}

VectorField advect(const DiskGrid& g, const VectorField& phi, const VectorField& f) {
  return advect(g, phi, gradient(g, f));
}

ScalarField advect_scalar(const DiskGrid& g, const VectorField& phi, const ScalarField& s) {
  require_on_grid(g, phi, "advect_scalar");
  require_on_grid(g, s.v, "advect_scalar");
  return {g.dealiased_product(phi.u1, g.d_x(s.v)) + g.dealiased_product(phi.u2, g.d_y(s.v))};
}

VectorField salt_T(const DiskGrid& g, const FieldWithGradient& xi, const VectorField& f) {
  require_on_grid(g, f, "salt_T");
  require_on_grid(g, xi.value, "salt_T");
  const VectorGradient& d = xi.grad;
  VectorField out;
  out.u1 = g.dealiased_product(f.u1, d.d1_f1) + g.dealiased_product(f.u2, d.d1_f2);
  out.u2 = g.dealiased_product(f.u1, d.d2_f1) + g.dealiased_product(f.u2, d.d2_f2);
  return out;
}

VectorField salt_T(const DiskGrid& g, const VectorField& xi, const VectorField& f) {
  return salt_T(g, with_spectral_gradient(g, xi), f);
}

VectorField salt_B(const DiskGrid& g, const FieldWithGradient& xi, const VectorField& f) {
  return advect(g, xi.value, f) + salt_T(g, xi, f);
}

VectorField salt_B(const DiskGrid& g, const VectorField& xi, const VectorField& f) {
  return salt_B(g, with_spectral_gradient(g, xi), f);
}

ScalarField curl(const DiskGrid& g, const VectorField& f) {
  require_on_grid(g, f, "curl");
  return {g.d_x(f.u2) - g.d_y(f.u1)};
}

VectorField grad_perp(const DiskGrid& g, const ScalarField& s) {
  require_on_grid(g, s.v, "grad_perp");
  return {-g.d_y(s.v), g.d_x(s.v)};
}

VectorField gradient_of(const DiskGrid& g, const ScalarField& s) {
  require_on_grid(g, s.v, "gradient_of");
  return {g.d_x(s.v), g.d_y(s.v)};
}

ScalarField divergence(const DiskGrid& g, const VectorField& f) {
  require_on_grid(g, f, "divergence");
  return {g.d_x(f.u1) + g.d_y(f.u2)};
}

VectorField leray_project(const DiskGrid& g, const VectorField& f) {
  const auto sol = g.solve_dirichlet_poisson(curl(g, f).v);
  // The Poisson solve returns psi_r from the interpolant that includes r = 1,
  // so use it rather than re-differentiating on the interior nodes.
  const Array2 psi_t_over_r = cw(g.d_theta(sol.psi), g.inv_r());
  VectorField out;
  out.u1 = -(cw(g.sin_theta(), sol.psi_r) + cw(g.cos_theta(), psi_t_over_r));
  out.u2 = cw(g.cos_theta(), sol.psi_r) - cw(g.sin_theta(), psi_t_over_r);
  return out;
}

VectorField stokes_apply(const DiskGrid& g, const VectorField& f) {
  require_on_grid(g, f, "stokes_apply");
  VectorField lap{g.laplacian(f.u1), g.laplacian(f.u2)};
  VectorField out = leray_project(g, lap);
  out *= -1.0;
  return out;
}

VectorField stokes_apply(const BasisSet& basis, const Eigen::VectorXd& c) {
  if (c.size() > basis.size()) throw std::invalid_argument("stokes_apply: too many coefficients");
  const Eigen::VectorXd lam = basis.eigenvalues().head(c.size());
  return basis.synthesize(lam.cwiseProduct(c));
}

BoundaryTrace boundary_trace(const DiskGrid& g, const VectorField& f) {
  require_on_grid(g, f, "boundary_trace");
  const Eigen::VectorXd b1 = g.boundary_values(f.u1);
  const Eigen::VectorXd b2 = g.boundary_values(f.u2);
  const Eigen::ArrayXd c = g.theta_nodes().array().cos();
  const Eigen::ArrayXd s = g.theta_nodes().array().sin();
  BoundaryTrace t;
  t.normal = (b1.array() * c + b2.array() * s).matrix();
  t.tangent = (-b1.array() * s + b2.array() * c).matrix();
  return t;
}

BoundaryTrace boundary_trace(const DiskGrid& g, const ScalarField& s) {
  require_on_grid(g, s.v, "boundary_trace");
  return {g.boundary_values(s.v), Eigen::VectorXd()};
}

double norm_l2(const DiskGrid& g, const VectorField& f) { return std::sqrt(inner_l2(g, f, f)); }

double norm_l2(const DiskGrid& g, const ScalarField& s) { return std::sqrt(inner_l2(g, s, s)); }

double norm_h1(const DiskGrid& g, const VectorField& f) { return std::sqrt(inner_h1(g, f, f)); }

double norm_h1(const DiskGrid& g, const ScalarField& s) {
  require_on_grid(g, s.v, "norm_h1");
  const Array2 sx = g.d_x(s.v);
  const Array2 sy = g.d_y(s.v);
  return std::sqrt(g.integrate(cw(sx, sx) + cw(sy, sy)));
}

double greens_defect(const DiskGrid& g, const VectorField& f, const VectorField& phi,
                     double alpha) {
  constexpr double kappa = 1.0;
  const VectorField lap{g.laplacian(f.u1), g.laplacian(f.u2)};
  return std::abs(inner_l2(g, lap, phi) + inner_h1(g, f, phi) -
                  (kappa - alpha) * inner_boundary(g, f, phi));
}

double curl_commute_defect(const DiskGrid& g, const FieldWithGradient& xi,
                           const VectorField& phi) {
  const ScalarField lhs = curl(g, leray_project(g, salt_B(g, xi, phi)));
  const ScalarField rhs = advect_scalar(g, xi.value, curl(g, phi));
  return norm_l2(g, ScalarField{lhs.v - rhs.v});
}

double nonlinear_antisymmetry_defect(const DiskGrid& g, const VectorField& phi,
                                     const VectorField& f, const VectorField& h) {
  return std::abs(inner_l2(g, advect(g, phi, f), h) + inner_l2(g, f, advect(g, phi, h)));
}

double ladyzhenskaya_ratio(const DiskGrid& g, const VectorField& phi, const VectorField& f,
                           const VectorField& h) {
  const double num = std::abs(inner_l2(g, advect(g, phi, f), h));
  const double den = std::sqrt(norm_l2(g, phi) * norm_h1(g, phi)) * norm_h1(g, f) *
                     std::sqrt(norm_l2(g, h) * norm_h1(g, h));
  return num / den;
}

double trace_ratio(const DiskGrid& g, const VectorField& f) {
  const double l2 = norm_l2(g, f);
  const double w12 = std::sqrt(l2 * l2 + inner_h1(g, f, f));
  return inner_boundary(g, f, f) / (l2 * w12);
}

}  // namespace sdns
