#include "doctest.h"

#include "sdns/bessel.hpp"
#include "sdns_oracle/fd.hpp"

#include <cmath>
#include <stdexcept>

using sdns::bessel_j;

TEST_CASE("bessel_j agrees with the trapezoid-integral oracle") {
  double worst = 0.0;
  for (int n = 0; n <= 40; ++n) {
    for (double x = 0.05; x < 120.0; x *= 1.17) {
      const double ref = sdns_oracle::fd_bessel_j(n, x);
      worst = std::max(worst, std::abs(bessel_j(n, x) - ref));
    }
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("bessel_j agrees with std::cyl_bessel_j away from underflow") {
  for (int n : {0, 1, 2, 7, 15, 30}) {
    for (double x : {0.3, 1.0, 2.5, 9.75, 31.0, 77.7}) {
      const double ref = std::cyl_bessel_j(static_cast<double>(n), x);
      CHECK(std::abs(bessel_j(n, x) - ref) < 1e-13 * std::max(1.0, std::abs(ref)) + 1e-300);
    }
  }
}

TEST_CASE("special values") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(3, 0.0) == 0.0);
  CHECK(std::abs(bessel_j(0, 2.404825557695773)) < 1e-15);
  CHECK(std::abs(bessel_j(1, 3.8317059702075125)) < 1e-15);
  // J_n(-x) = (-1)^n J_n(x)
  CHECK(bessel_j(3, -1.7) == doctest::Approx(-bessel_j(3, 1.7)).epsilon(1e-15));
}

TEST_CASE("orders from one sweep match single evaluations") {
  for (double x : {0.4, 5.0, 48.0}) {
    const auto all = sdns::bessel_j_orders(25, x);
    REQUIRE(all.size() == 26);
    for (int n = 0; n <= 25; ++n) CHECK(std::abs(all[n] - bessel_j(n, x)) < 1e-15);
  }
}

TEST_CASE("derivative recurrences") {
  for (double x : {0.2, 3.3, 17.0}) {
    CHECK(std::abs(sdns::bessel_j_prime(0, x) + bessel_j(1, x)) < 1e-14);
    for (int n = 1; n < 8; ++n)
      CHECK(std::abs(sdns::bessel_j_prime(n, x) - 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x))) <
            1e-14);
  }
}

TEST_CASE("negative order is rejected") {
  CHECK_THROWS_AS(bessel_j(-1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sdns::bessel_j_orders(-2, 1.0), std::invalid_argument);
}
