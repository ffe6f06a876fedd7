#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "ctrldiss/rng.hpp"
#include "ctrldiss/simulator.hpp"
#include "ctrldiss/stationary.hpp"

using namespace ctrldiss;

namespace {

ScenarioParams small_scenario(double lambda, double mu, int capacity) {
  ScenarioParams s;
  s.arrival_rate = lambda;
  s.expiry_rate = mu;
  s.capacity = capacity;
  s.element_bits = 8;
  s.churn_rate = 0.0;
  s.neighbor_ber = {0.0};
  s.relevance_threshold = 0.95;
  return s;
}

// Literal re-evaluation of the two slot distributions, independent of the
// library implementations, for cross-checking small kernels.
double naive_binomial(int d, int r, double mu) {
  const double death = 1.0 - std::exp(-mu);
  double choose = 1.0;
  for (int k = 0; k < d; ++k) choose = choose * (r - k) / (k + 1);
  return choose * std::pow(death, d) * std::pow(1.0 - death, r - d);
}

double naive_truncated_poisson(int n, int r, int d, double lambda, int capacity) {
  const int bound = capacity + d - r;
  auto mass = [&](int k) {
    return std::pow(lambda, k) * std::exp(-lambda) / std::tgamma(k + 1.0);
  };
  if (bound == 0) return n == 0 ? 1.0 : 0.0;
  if (n < bound) return mass(n);
  double below = 0.0;
  for (int k = 0; k < bound; ++k) below += mass(k);
  return 1.0 - below;
}

}  // namespace

TEST_SUITE_BEGIN("stationary");

TEST_CASE("kernel rows are stochastic with entries in range") {
  for (const auto& sc : {small_scenario(1.0, 0.5, 2), small_scenario(3.0, 0.05, 30),
                         small_scenario(0.2, 0.9, 12)}) {
    const TransitionKernel kernel = build_kernel(sc);
    REQUIRE(kernel.size == sc.capacity + 1);
    for (int r = 0; r < kernel.size; ++r) {
      CHECK(std::abs(kernel.row_sum(r) - 1.0) < 1e-10);
      for (int c = 0; c < kernel.size; ++c) {
        CHECK(kernel.at(r, c) >= 0.0);
        CHECK(kernel.at(r, c) <= 1.0);
      }
    }
  }
}

TEST_CASE("no arrivals gives a pure-death kernel") {
  const TransitionKernel kernel = build_kernel(small_scenario(0.0, 0.3, 6));
  CHECK(kernel.at(0, 0) == 1.0);
  for (int r = 0; r < kernel.size; ++r)
    for (int c = r + 1; c < kernel.size; ++c) CHECK(kernel.at(r, c) == 0.0);
}

TEST_CASE("fast expiry with no arrivals empties the store in one slot") {
  const TransitionKernel kernel = build_kernel(small_scenario(0.0, 30.0, 6));
  for (int r = 0; r < kernel.size; ++r) CHECK(kernel.at(r, 0) > 1.0 - 1e-9);
}

TEST_CASE("kernel matches a direct enumeration on a 3-state chain") {
  const ScenarioParams sc = small_scenario(1.0, 0.5, 2);
  const TransitionKernel kernel = build_kernel(sc);
  for (int r = 0; r <= 2; ++r) {
    std::vector<double> expected(3, 0.0);
    for (int d = 0; d <= r; ++d)
      for (int n = 0; n <= 2 + d - r; ++n)
        expected[r - d + n] += naive_binomial(d, r, 0.5) *
                               naive_truncated_poisson(n, r, d, 1.0, 2);
    for (int c = 0; c <= 2; ++c)
      CHECK(kernel.at(r, c) == doctest::Approx(expected[c]).epsilon(1e-12));
  }
}

TEST_CASE("no arrivals makes the empty state absorbing") {
  const StationaryDistribution pi =
      solve_stationary(build_kernel(small_scenario(0.0, 0.2, 8)));
  CHECK(pi.pi[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (int r = 1; r < pi.states(); ++r) CHECK(pi.pi[r] < 1e-10);
}

TEST_CASE("both solvers agree and satisfy the fixed point") {
  Rng rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    const int capacity = 2 + static_cast<int>(rng.next_double() * 28);
    const double mu = 0.05 + rng.next_double() * 0.6;
    const double lambda = 0.1 + rng.next_double() * (capacity * mu * 1.5);
    const TransitionKernel kernel = build_kernel(small_scenario(lambda, mu, capacity));

    const StationaryDistribution direct = solve_direct(kernel);
    const StationaryDistribution power = solve_power(kernel);
    CHECK(stationary_residual(kernel, direct) < 1e-8);
    CHECK(stationary_residual(kernel, power) < 1e-8);

    double sum = 0.0;
    for (int r = 0; r < direct.states(); ++r) {
      CHECK(direct.pi[r] >= 0.0);
      sum += direct.pi[r];
      CHECK(std::abs(direct.pi[r] - power.pi[r]) < 1e-8);
    }
    CHECK(std::abs(sum - 1.0) < 1e-10);
  }
}

TEST_CASE("stationary law matches long-run occupancy on a 3-state chain") {
  const ScenarioParams sc = small_scenario(1.0, 0.5, 2);
  const StationaryDistribution pi = solve_stationary(build_kernel(sc));
  const std::vector<double> occupancy = occupancy_histogram(sc, 10000000, 1000, 17);
  for (int r = 0; r <= 2; ++r)
    CHECK(std::abs(occupancy[r] - pi.pi[r]) < 1e-3);
}

TEST_CASE("mean additions balance mean deletions at the fixed point") {
  for (const auto& sc : {small_scenario(0.5, 0.07, 40), small_scenario(2.0, 0.07, 40),
                         small_scenario(10.0, 0.07, 40)}) {
    const TransitionKernel kernel = build_kernel(sc);
    const StationaryDistribution pi = solve_stationary(kernel);
    const double death = -std::expm1(-sc.expiry_rate);
    double deletions = 0.0, additions = 0.0;
    for (int r = 0; r < pi.states(); ++r) {
      if (pi.pi[r] == 0.0) continue;
      deletions += pi.pi[r] * r * death;
      // E[next state] - E[survivors] summed over the kernel row.
      double next_mean = 0.0;
      for (int c = 0; c < kernel.size; ++c) next_mean += kernel.at(r, c) * c;
      additions += pi.pi[r] * (next_mean - (r - r * death));
    }
    CHECK(std::abs(additions - deletions) < 1e-8);
  }
}

TEST_CASE("heavier arrivals shift the stationary law upward") {
  std::vector<double> previous_cdf;
  for (double lambda : {0.5, 1.0, 2.0, 4.0}) {
    const StationaryDistribution pi =
        solve_stationary(build_kernel(small_scenario(lambda, 0.1, 20)));
    std::vector<double> cdf(pi.pi.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < pi.pi.size(); ++k) {
      acc += pi.pi[k];
      cdf[k] = acc;
    }
    if (!previous_cdf.empty())
      for (std::size_t k = 0; k < cdf.size(); ++k)
        CHECK(cdf[k] <= previous_cdf[k] + 1e-9);
    previous_cdf = cdf;
  }
}

TEST_CASE("power iteration reports a residual on failure") {
  const TransitionKernel kernel = build_kernel(small_scenario(2.0, 0.05, 25));
  CHECK_THROWS_AS(solve_power(kernel, 1e-10, 2), std::runtime_error);
}

TEST_CASE("pi debug dump is two-column csv") {
  const StationaryDistribution pi =
      solve_stationary(build_kernel(small_scenario(1.0, 0.5, 2)));
  std::ostringstream out;
  write_pi_csv(out, pi);
  CHECK(out.str().substr(0, 7) == "r,pi_r\n");
  int lines = 0;
  for (char ch : out.str())
    if (ch == '\n') ++lines;
  CHECK(lines == 4);
}

TEST_SUITE_END();
