#pragma once

#include "sdns/disk_basis.hpp"
#include "sdns/disk_grid.hpp"
#include "sdns/fields.hpp"

namespace sdns {

/// Cartesian Jacobian of a vector field: dJ_fI = d f^I / d x_J.
struct VectorGradient {
  Array2 d1_f1, d2_f1, d1_f2, d2_f2;
};

/// A vector field together with its first derivatives. Used for the noise
/// fields, whose derivatives are known in closed form.
struct FieldWithGradient {
  VectorField value;
  VectorGradient grad;
};

VectorGradient gradient(const DiskGrid& g, const VectorField& f);
FieldWithGradient with_spectral_gradient(const DiskGrid& g, const VectorField& f);

/// L_phi f = sum_j phi^j d_j f, products dealiased in theta.
VectorField advect(const DiskGrid& g, const VectorField& phi, const VectorField& f);
VectorField advect(const DiskGrid& g, const VectorField& phi, const VectorGradient& grad_f);
ScalarField advect_scalar(const DiskGrid& g, const VectorField& phi, const ScalarField& s);

/// T_xi f = sum_j f^j grad(xi^j).
VectorField salt_T(const DiskGrid& g, const FieldWithGradient& xi, const VectorField& f);
VectorField salt_T(const DiskGrid& g, const VectorField& xi, const VectorField& f);
/// B_xi f = L_xi f + T_xi f.
VectorField salt_B(const DiskGrid& g, const FieldWithGradient& xi, const VectorField& f);
VectorField salt_B(const DiskGrid& g, const VectorField& xi, const VectorField& f);

/// d_1 f^2 - d_2 f^1.
ScalarField curl(const DiskGrid& g, const VectorField& f);
/// (-d_2 s, d_1 s), so that curl(grad_perp(s)) = laplacian(s).
VectorField grad_perp(const DiskGrid& g, const ScalarField& s);
VectorField gradient_of(const DiskGrid& g, const ScalarField& s);
ScalarField divergence(const DiskGrid& g, const VectorField& f);

/// grad_perp(psi) with laplacian(psi) = curl f and psi = 0 on r = 1.
VectorField leray_project(const DiskGrid& g, const VectorField& f);

/// -P(laplacian f), evaluated on the grid.
VectorField stokes_apply(const DiskGrid& g, const VectorField& f);
/// sum_k lambda_k c_k a_k.
VectorField stokes_apply(const BasisSet& basis, const Eigen::VectorXd& c);

BoundaryTrace boundary_trace(const DiskGrid& g, const VectorField& f);
BoundaryTrace boundary_trace(const DiskGrid& g, const ScalarField& s);

double norm_l2(const DiskGrid& g, const VectorField& f);
double norm_l2(const DiskGrid& g, const ScalarField& s);
/// Gradient seminorm ||f||_1.
double norm_h1(const DiskGrid& g, const VectorField& f);
double norm_h1(const DiskGrid& g, const ScalarField& s);

/// |<lap f, phi> + <f, phi>_1 - <(kappa - alpha) f, phi>_boundary| with kappa = 1.
/// Only meaningful when f satisfies the slip condition for `alpha`.
double greens_defect(const DiskGrid& g, const VectorField& f, const VectorField& phi,
                     double alpha);

/// L^2 norm of curl(P B_xi phi) - L_xi curl(phi).
double curl_commute_defect(const DiskGrid& g, const FieldWithGradient& xi,
                           const VectorField& phi);

/// |<L_phi f, g> + <f, L_phi g>|.
double nonlinear_antisymmetry_defect(const DiskGrid& g, const VectorField& phi,
                                     const VectorField& f, const VectorField& h);

/// |<L_phi f, h>| / (||phi||^1/2 ||phi||_1^1/2 ||f||_1 ||h||^1/2 ||h||_1^1/2).
double ladyzhenskaya_ratio(const DiskGrid& g, const VectorField& phi, const VectorField& f,
                           const VectorField& h);

/// ||f||^2_{L^2(boundary)} / (||f|| ||f||_{W^{1,2}}).
double trace_ratio(const DiskGrid& g, const VectorField& f);

}  // namespace sdns
