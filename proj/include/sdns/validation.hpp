#pragma once

#include "sdns/disk_basis.hpp"
#include "sdns/galerkin.hpp"
#include "sdns/noise.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sdns {

/// One measured invariant. Report-only entries always pass.
struct Check {
  std::string name;
  double value = 0.0;
  std::string bound;
  bool pass = true;
  bool report_only = false;
};

Check check_below(const std::string& name, double value, double limit);
Check check_at_least(const std::string& name, double value, double limit);
Check check_within(const std::string& name, double value, double lo, double hi);
Check check_report(const std::string& name, double value);

struct ValidationParams {
  int samples = 100;
  std::uint64_t seed = 1;
};

/// Random span element: N(0,1) / sqrt(lambda_k) coefficients, unit L^2 norm.
Eigen::VectorXd random_coefficients(const BasisSet& basis, std::uint64_t seed, int sample);

/// Orthonormality, eigen-relation, slip and normal traces, H-orthogonality,
/// eigenvalue positivity, the 1/sqrt(lambda_n) tail bound and L^2-orthogonality
/// of gradients to the span.
std::vector<Check> basis_checks(const BasisSet& basis, const ValidationParams& p);

/// Leray, curl, Green, trilinear, Stokes and SALT identities on random span
/// fields, plus the Ladyzhenskaya and trace ratios (reported).
std::vector<Check> operator_checks(const BasisSet& basis, const NoiseModel& noise,
                                   const ValidationParams& p);

/// Divergence and support of the correlation fields, summability, increment
/// statistics, determinism and bridge consistency.
std::vector<Check> noise_checks(const NoiseModel& noise, const DiskGrid& grid,
                                const ValidationParams& p);

/// Galerkin drift antisymmetry, decay orders, energy balance, Ito/Stratonovich
/// consistency, the hitting monitor and ensemble uniformity in n_modes.
std::vector<Check> galerkin_checks(const SimConfig& cfg, const ValidationParams& p);

/// Vorticity identities, enstrophy ledger, Biot-Savart recovery, agreement
/// with the velocity form and the viscosity sweep (alpha forced to 2).
std::vector<Check> vorticity_checks(const SimConfig& cfg, const std::vector<double>& nu_list,
                                    const ValidationParams& p);

/// Every group above for one configuration.
std::vector<Check> run_validation(const SimConfig& cfg, const std::vector<double>& nu_list,
                                  const ValidationParams& p);

/// One line per check: status, name, measured value, bound.
void write_validation_report(std::ostream& os, const std::vector<Check>& checks);
bool all_passed(const std::vector<Check>& checks);

}  // namespace sdns
