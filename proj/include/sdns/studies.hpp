#pragma once

#include "sdns/galerkin.hpp"

#include <cstdint>
#include <vector>

namespace sdns {

/// Errors at a sequence of halved time steps.
struct RefinementStudy {
  std::vector<double> dt;
  std::vector<double> errors;

  /// errors[i] / errors[i + 1].
  std::vector<double> ratios() const;
  /// log2 of ratios().
  std::vector<double> orders() const;
  /// Least-squares slope of log(error) against log(dt).
  double fitted_order() const;
};

// Every study starts at cfg.dt and halves it `levels - 1` times; stochastic
// studies refine one Brownian path by bridge insertion so all levels see the
// same noise. The hitting monitor is disabled.

/// Noise and advection off, u0 = amplitude * a_mode: |c_mode(T) - exact decay|
/// for cfg.scheme.
RefinementStudy decay_study(const SimConfig& cfg, int levels);

/// Noise off: |||u_T||^2 + 2 nu int ||u||_H^2 - ||u_0||^2|.
RefinementStudy energy_balance_study(const SimConfig& cfg, int levels);

/// Vorticity form (alpha = 2): |enstrophy defect at T| on the path of `seed`.
RefinementStudy enstrophy_study(const SimConfig& cfg, std::uint64_t seed, int levels);

/// Vorticity form with nu = 0, advection off and only the first noise mode:
/// | ||w_T|| - ||w_0|| |.
RefinementStudy transport_study(const SimConfig& cfg, std::uint64_t seed, int levels);

/// Root mean square over `paths` paths (seeds seed ^ p) of
/// ||c_ito-euler(T) - c_strat-heun(T)||.
RefinementStudy ito_strat_study(const SimConfig& cfg, std::uint64_t seed, int paths, int levels);

/// sup_t ||u_velocity-form - u_vorticity-form|| at alpha = 2 on the path of
/// `seed`, relative to sup_t ||u||.
double cross_formulation_gap(const SimConfig& cfg, std::uint64_t seed);

}  // namespace sdns
