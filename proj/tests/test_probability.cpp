#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ctrldiss/probability.hpp"
#include "ctrldiss/rng.hpp"

using namespace ctrldiss;

TEST_SUITE_BEGIN("probability");

TEST_CASE("message loss matches the single-link anchor") {
  // ber 6.6e-6 with 2-byte elements makes a capacity-sized message miss
  // about one time in ten.
  const double p = message_loss_prob(6.6e-6, 1000, 16);
  CHECK(p > 0.095);
  CHECK(p < 0.105);
}

TEST_CASE("message loss edge cases") {
  CHECK(message_loss_prob(0.0, 12345, 64) == 0.0);
  CHECK(message_loss_prob(0.3, 0, 64) == 0.0);
  CHECK(message_loss_prob(0.5, 1, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(message_loss_prob(1.0, 1, 1), std::domain_error);
  CHECK_THROWS_AS(message_loss_prob(-0.1, 1, 1), std::domain_error);
  CHECK_THROWS_AS(message_loss_prob(0.1, -1, 1), std::domain_error);
  CHECK_THROWS_AS(message_loss_prob(0.1, 1, 0), std::domain_error);
}

TEST_CASE("message loss is monotone in every argument") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const double ber = rng.next_double() * 0.01;
    const long long s = 1 + static_cast<long long>(rng.next_double() * 400);
    const long long bits = 1 + static_cast<long long>(rng.next_double() * 63);
    const double base = message_loss_prob(ber, s, bits);
    CHECK(base >= 0.0);
    CHECK(base <= 1.0);
    // The strict bound only makes sense while 1 - base is representable.
    if (-static_cast<double>(s * bits) * std::log1p(-ber) < 36.0)
      CHECK(base < 1.0);
    CHECK(message_loss_prob(ber * 1.5, s, bits) >= base);
    CHECK(message_loss_prob(ber, s + 7, bits) >= base);
    CHECK(message_loss_prob(ber, s, bits + 3) >= base);
  }
}

TEST_CASE("deletion distribution basics") {
  CHECK(deletion_dist(0, 0, 0.3) == 1.0);
  // One element, one slot: the per-slot death probability itself.
  CHECK(deletion_dist(1, 1, 0.01) ==
        doctest::Approx(-std::expm1(-0.01)).epsilon(1e-13));
  CHECK(deletion_dist(1, 1, 0.01) == doctest::Approx(0.0099502).epsilon(1e-4));
  CHECK_THROWS_AS(deletion_dist(3, 2, 0.1), std::domain_error);
  CHECK_THROWS_AS(deletion_dist(-1, 2, 0.1), std::domain_error);
}

TEST_CASE("deletion distribution normalizes") {
  double total = 0.0;
  for (int d = 0; d <= 50; ++d) total += deletion_dist(d, 50, 0.02);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int r = static_cast<int>(rng.next_double() * 400);
    const double mu = 1e-3 + rng.next_double() * 3.0;
    double sum = 0.0;
    for (int d = 0; d <= r; ++d) {
      const double p = deletion_dist(d, r, mu);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("addition distribution examples") {
  // No room left: the only possible count is zero additions.
  CHECK(addition_dist(0, 10, 0, 2.0, 10) == 1.0);
  CHECK(addition_dist(1, 0, 0, 2.0, 1000) ==
        doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(addition_dist(5, 3, 1, 2.0, 6), std::domain_error);
  CHECK_THROWS_AS(addition_dist(0, 3, 4, 2.0, 6), std::domain_error);
}

TEST_CASE("addition distribution normalizes and the tail is exact") {
  {
    double total = 0.0;
    for (int n = 0; n <= 20 + 3 - 10; ++n)
      total += addition_dist(n, 10, 3, 5.0, 20);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }

  Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const int capacity = 1 + static_cast<int>(rng.next_double() * 300);
    const int r = static_cast<int>(rng.next_double() * (capacity + 1));
    const int d = static_cast<int>(rng.next_double() * (r + 1));
    const double lambda = rng.next_double() * 20.0;
    const int bound = capacity + d - r;
    double total = 0.0;
    for (int n = 0; n <= bound; ++n) {
      const double p = addition_dist(n, r, d, lambda, capacity);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

    if (bound > 0) {
      // The boundary mass must equal the complement of the open Poisson sum.
      double below = 0.0;
      for (int k = 0; k < bound; ++k) below += poisson_pmf(k, lambda);
      CHECK(std::abs(addition_dist(bound, r, d, lambda, capacity) -
                     (1.0 - below)) < 1e-12);
    }
  }
}

TEST_CASE("zero arrival rate degenerates to no additions") {
  CHECK(addition_dist(0, 5, 2, 0.0, 50) == 1.0);
  CHECK(addition_dist(3, 5, 2, 0.0, 50) == 0.0);
}

TEST_SUITE_END();
