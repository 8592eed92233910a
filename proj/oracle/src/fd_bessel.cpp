#include "sdns_oracle/fd.hpp"

#include <cmath>
#include <numbers>

namespace sdns_oracle {

double fd_bessel_j(int n, double x) {
  // The integrand is a trig polynomial-like periodic function with bandwidth
  // about |x| + |n|; twice that plus a margin makes the rule exact to rounding.
  const int nodes = 64 + 2 * static_cast<int>(std::abs(x) + std::abs(n));
  const double h = 2.0 * std::numbers::pi / nodes;
  double s = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double t = k * h;
    s += std::cos(n * t - x * std::sin(t));
  }
  return s / nodes;
}

}  // namespace sdns_oracle
