#include "sdns/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdns {
namespace {

constexpr double kSeriesLimit = 1.0;
constexpr double kBig = 1e250;

// Ascending series sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!).
double series_j(int n, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int j = 1; j <= n; ++j) term *= half / j;
  if (term == 0.0) return 0.0;
  const double q = -half * half;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

std::vector<double> bessel_j_orders(int n_max, double x) {
  if (n_max < 0) throw std::invalid_argument("bessel_j_orders: negative order");
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  const double ax = std::abs(x);
  if (ax == 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (ax < kSeriesLimit) {
    for (int n = 0; n <= n_max; ++n) out[n] = series_j(n, ax);
  } else {
    const double top = std::max(static_cast<double>(n_max), ax);
    int start = static_cast<int>(top + 30.0 + std::sqrt(60.0 * top));
    start += start % 2;  // even start keeps the normalization sum aligned
    double next = 0.0;   // J_{k+1}
    double cur = 1e-300; // J_k
    double norm = 0.0;
    for (int k = start; k >= 1; --k) {
      const double prev = 2.0 * k / ax * cur - next;  // J_{k-1}
      next = cur;
      cur = prev;
      if (k - 1 <= n_max) out[k - 1] = cur;
      if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
      if (std::abs(cur) > kBig) {
        cur /= kBig;
        next /= kBig;
        norm /= kBig;
        for (int j = k - 1; j <= n_max; ++j) out[j] /= kBig;
      }
    }
    norm += cur;
    for (double& v : out) v /= norm;
  }
  if (x < 0.0) {
    for (int n = 1; n <= n_max; n += 2) out[n] = -out[n];
  }
  return out;
}

double bessel_j(int n, double x) {
  if (n < 0) throw std::invalid_argument("bessel_j: negative order");
  return bessel_j_orders(n, x)[n];
}

double bessel_j_prime(int n, double x) {
  const auto j = bessel_j_orders(n + 1, x);
  if (n == 0) return -j[1];
  return 0.5 * (j[n - 1] - j[n + 1]);
}

}  // namespace sdns
