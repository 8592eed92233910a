#pragma once

#include <vector>

namespace sdns {

/// Bessel functions of the first kind J_n(x) for integer order n >= 0.
///
/// Small arguments use the ascending series; otherwise Miller's backward
/// recurrence normalized by J_0 + 2 sum J_2k = 1. Target accuracy is about
/// 1e-14 relative to max(|J_n(x)|, tiny) over the range used for the disk
/// eigenproblems (x up to a few hundred).
double bessel_j(int n, double x);

/// J_0(x), ..., J_{n_max}(x) from a single recurrence sweep.
std::vector<double> bessel_j_orders(int n_max, double x);

/// dJ_n/dx.
double bessel_j_prime(int n, double x);

}  // namespace sdns
