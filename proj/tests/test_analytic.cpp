#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ctrldiss/analytic.hpp"
#include "ctrldiss/probability.hpp"
#include "ctrldiss/rng.hpp"
#include "ctrldiss/stationary.hpp"

using namespace ctrldiss;

namespace {

StationaryDistribution point_mass(int capacity, int state) {
  StationaryDistribution pi;
  pi.pi.assign(capacity + 1, 0.0);
  pi.pi[state] = 1.0;
  return pi;
}

StationaryDistribution random_distribution(int capacity, Rng& rng) {
  StationaryDistribution pi;
  pi.pi.resize(capacity + 1);
  double total = 0.0;
  for (double& p : pi.pi) {
    p = rng.next_double();
    total += p;
  }
  for (double& p : pi.pi) p /= total;
  return pi;
}

ScenarioParams reference_scenario(double load) {
  ScenarioParams s;
  s.expiry_rate = 0.01;
  s.capacity = 1000;
  s.element_bits = 16;
  s.churn_rate = 0.001;
  s.neighbor_ber = {6.6e-6};
  s.relevance_threshold = 0.95;
  return s.with_load(load);
}

// The cycle relevance before summation: the dump must arrive, then the i-th
// differential being the first loss leaves i of the period's slots covered.
double cycle_relevance_by_summation(double p_f, double p_d, int period) {
  double acc = std::pow(1.0 - p_d, period - 1);
  for (int i = 1; i <= period - 1; ++i)
    acc += std::pow(1.0 - p_d, i - 1) * p_d * (static_cast<double>(i) / period);
  return (1.0 - p_f) * acc;
}

}  // namespace

TEST_SUITE_BEGIN("analytic");

TEST_CASE("mean elements of point masses") {
  CHECK(mean_elements(point_mass(10, 0)) == 0.0);
  CHECK(mean_elements(point_mass(10, 10)) == 10.0);
}

TEST_CASE("mean deletions: closed form equals the double sum") {
  CHECK(mean_deletions(point_mass(10, 0), 0.3) == 0.0);
  CHECK(mean_deletions(point_mass(1000, 1000), 0.01) ==
        doctest::Approx(1000.0 * -std::expm1(-0.01)).epsilon(1e-13));
  CHECK(mean_deletions(point_mass(1000, 1000), 0.01) ==
        doctest::Approx(9.9502).epsilon(1e-4));

  Rng rng(5);
  const double mu = 0.21;
  const StationaryDistribution pi = random_distribution(60, rng);
  double by_sum = 0.0;
  for (int d = 0; d <= 60; ++d) {
    double inner = 0.0;
    for (int r = d; r <= 60; ++r) inner += pi.pi[r] * deletion_dist(d, r, mu);
    by_sum += d * inner;
  }
  CHECK(std::abs(mean_deletions(pi, mu) - by_sum) < 1e-10);
}

TEST_CASE("control volume formula") {
  const ProtocolParams every_slot = ProtocolParams::incremental(1, 3, 1);
  CHECK(avg_control_volume(500.0, 7.0, every_slot) == 1500.0);

  // Long periods amortize the dump away and leave the differential term.
  const ProtocolParams long_period = ProtocolParams::incremental(100000000, 1, 1);
  CHECK(avg_control_volume(500.0, 7.0, long_period) ==
        doctest::Approx(14.0).epsilon(1e-6));

  const ProtocolParams mixed = ProtocolParams::incremental(10, 2, 1);
  CHECK(avg_control_volume(1000.0, 9.9502, mixed) ==
        doctest::Approx(217.91036).epsilon(1e-10));

  CHECK_THROWS_AS(
      avg_control_volume(10.0, 1.0, ProtocolParams::cumulative(10, 1, 1)),
      std::invalid_argument);
}

TEST_CASE("volume is increasing in retries and its period trend follows the sign rule") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const double avg_r = 1.0 + rng.next_double() * 2000.0;
    const double avg_d = rng.next_double() * avg_r * 0.2;
    const int period = 1 + static_cast<int>(rng.next_double() * 150);
    const int rf = 1 + static_cast<int>(rng.next_double() * 6);
    const int rd = 1 + static_cast<int>(rng.next_double() * 6);
    const double v = avg_control_volume(avg_r, avg_d,
                                        ProtocolParams::incremental(period, rf, rd));
    CHECK(avg_control_volume(avg_r, avg_d,
                             ProtocolParams::incremental(period, rf + 1, rd)) > v);
    CHECK(avg_control_volume(avg_r, avg_d,
                             ProtocolParams::incremental(period, rf, rd + 1)) >= v);
    const double step = avg_control_volume(
        avg_r, avg_d, ProtocolParams::incremental(period + 1, rf, rd)) - v;
    const double slope_sign = 2.0 * rd * avg_d - rf * avg_r;
    if (slope_sign > 1e-9) CHECK(step > 0.0);
    if (slope_sign < -1e-9) CHECK(step < 0.0);
  }
}

TEST_CASE("full dump loss probability") {
  const StationaryDistribution at_capacity = point_mass(1000, 1000);
  CHECK(loss_prob_full(at_capacity, 0.0, 16, 3) == 0.0);
  CHECK(loss_prob_full(at_capacity, 6.6e-6, 16, 1) ==
        doctest::Approx(message_loss_prob(6.6e-6, 1000, 16)).epsilon(1e-15));
  // Two attempts square the one-shot loss: about 1%.
  const double twice = loss_prob_full(at_capacity, 6.6e-6, 16, 2);
  CHECK(twice > 0.0090);
  CHECK(twice < 0.0111);
}

TEST_CASE("differential loss probability against a brute-force enumeration") {
  ScenarioParams sc;
  sc.arrival_rate = 1.0;
  sc.expiry_rate = 0.5;
  sc.capacity = 2;
  sc.element_bits = 8;
  sc.churn_rate = 0.0;
  sc.neighbor_ber = {0.01};
  sc.relevance_threshold = 0.95;
  const StationaryDistribution pi = solve_stationary(build_kernel(sc));

  double expected = 0.0;  // naive triple sum straight from the definitions
  for (int r = 0; r <= 2; ++r) {
    for (int d = 0; d <= r; ++d) {
      for (int n = 0; n <= 2 + d - r; ++n) {
        const double p_joint = pi.pi[r] * deletion_dist(d, r, 0.5) *
                               addition_dist(n, r, d, 1.0, 2);
        expected += p_joint * message_loss_prob(0.01, d + n, 8);
      }
    }
  }
  CHECK(loss_prob_diff(pi, sc, 0.01, 1) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(loss_prob_diff(pi, sc, 0.01, 2) - expected * expected) < 1e-12);

  CHECK(loss_prob_diff(pi, sc, 0.0, 1) == 0.0);
}

TEST_CASE("empty-store differentials are never lost") {
  ScenarioParams sc;
  sc.arrival_rate = 0.0;
  sc.expiry_rate = 0.2;
  sc.capacity = 5;
  sc.element_bits = 8;
  sc.churn_rate = 0.0;
  sc.neighbor_ber = {0.3};
  sc.relevance_threshold = 0.95;
  const StationaryDistribution pi = solve_stationary(build_kernel(sc));
  CHECK(loss_prob_diff(pi, sc, 0.3, 1) == 0.0);
}

TEST_CASE("retry counts strictly reduce both loss probabilities") {
  const ScenarioParams sc = reference_scenario(1.0);
  const StationaryDistribution pi = solve_stationary(build_kernel(sc));
  double prev_f = 1.0, prev_d = 1.0;
  for (int k = 1; k <= 5; ++k) {
    const double pf = loss_prob_full(pi, 6.6e-6, 16, k);
    const double pd = loss_prob_diff(pi, sc, 6.6e-6, k);
    CHECK(pf < prev_f);
    CHECK(pd < prev_d);
    CHECK(pf > 0.0);
    CHECK(pd > 0.0);
    prev_f = pf;
    prev_d = pd;
  }
}

TEST_CASE("cycle relevance closed form") {
  CHECK(relevance_per_cycle(0.25, 0.8, 1) == 0.75);
  CHECK(relevance_per_cycle(1.0, 0.3, 7) == 0.0);
  CHECK(relevance_per_cycle(0.1, 0.2, 4) ==
        doctest::Approx(cycle_relevance_by_summation(0.1, 0.2, 4)).epsilon(1e-12));
  CHECK(relevance_per_cycle(0.1, 0.2, 4) == doctest::Approx(0.6642).epsilon(1e-12));
  // Vanishing differential loss leaves only the dump factor.
  CHECK(relevance_per_cycle(0.3, 0.0, 50) == doctest::Approx(0.7).epsilon(1e-15));

  Rng rng(404);
  for (int trial = 0; trial < 400; ++trial) {
    const double p_f = rng.next_double();
    const double p_d = 1e-6 + rng.next_double() * (1.0 - 1e-6);
    const int period = 1 + static_cast<int>(rng.next_double() * 200);
    const double closed = relevance_per_cycle(p_f, p_d, period);
    const double summed = cycle_relevance_by_summation(p_f, p_d, period);
    CHECK(std::abs(closed - summed) < 1e-12);
  }
}

TEST_CASE("per-neighbor relevance discounts the startup gap") {
  CHECK(relevance_per_neighbor(0.93, 0.0, 50) == 0.93);
  CHECK(relevance_per_neighbor(1.0, 0.001, 100) ==
        doctest::Approx(0.95).epsilon(1e-12));
  CHECK(relevance_per_neighbor(0.0, 0.001, 100) == 0.0);
  CHECK_THROWS_AS(relevance_per_neighbor(0.9, 0.02, 100), std::domain_error);
}

TEST_CASE("all-neighbors relevance is a product and permutation invariant") {
  CHECK(relevance_all({0.42}) == 0.42);
  CHECK(relevance_all({0.9, 0.9, 0.9}) == doctest::Approx(std::pow(0.9, 3)));
  CHECK(relevance_all({0.99, 0.98, 0.97}) ==
        doctest::Approx(0.941094).epsilon(1e-6));

  Rng rng(8);
  std::vector<double> values(6);
  for (double& v : values) v = rng.next_double();
  std::vector<double> shuffled = values;
  std::reverse(shuffled.begin(), shuffled.end());
  std::swap(shuffled[1], shuffled[3]);
  CHECK(relevance_all(values) == doctest::Approx(relevance_all(shuffled)).epsilon(1e-15));
}

TEST_CASE("asymptotic report closed forms") {
  ScenarioParams sc = reference_scenario(1.0);

  const AnalyticReport dump_every_slot =
      asymptotic_report(sc, ProtocolParams::incremental(1, 1, 1));
  CHECK(dump_every_slot.control_volume == 1000.0);

  const AnalyticReport spread =
      asymptotic_report(sc, ProtocolParams::incremental(10, 1, 1));
  CHECK(spread.control_volume == doctest::Approx(117.91).epsilon(1e-4));
  CHECK(spread.mean_elements == 1000.0);
  CHECK(spread.mean_deletions ==
        doctest::Approx(mean_deletions(point_mass(1000, 1000), 0.01)).epsilon(1e-12));

  // The collapsed differential-loss expression equals the explicit sum over
  // deletion counts with message size 2d.
  const double ber = 6.6e-6;
  double explicit_sum = 0.0;
  for (int d = 0; d <= sc.capacity; ++d)
    explicit_sum += deletion_dist(d, sc.capacity, sc.expiry_rate) *
                    message_loss_prob(ber, 2 * d, sc.element_bits);
  CHECK(spread.diff_loss[0] == doctest::Approx(explicit_sum).epsilon(1e-10));
}

TEST_CASE("exact pipeline approaches the asymptotic one at high load") {
  const ScenarioParams sc = reference_scenario(2.0);
  const StationaryDistribution pi = solve_stationary(build_kernel(sc));
  const ProtocolParams protocol = ProtocolParams::incremental(50, 2, 2);
  const AnalyticReport exact = analytic_report(sc, protocol, pi);
  const AnalyticReport asym = asymptotic_report(sc, protocol);
  CHECK(exact.control_volume ==
        doctest::Approx(asym.control_volume).epsilon(0.02));
  CHECK(exact.relevance_all == doctest::Approx(asym.relevance_all).epsilon(0.02));
}

TEST_CASE("report invariants hold on the single-link scenario") {
  const ScenarioParams sc = reference_scenario(0.75);
  const StationaryDistribution pi = solve_stationary(build_kernel(sc));
  const AnalyticReport report =
      analytic_report(sc, ProtocolParams::incremental(40, 2, 1), pi);

  CHECK(report.mean_elements >= 0.0);
  CHECK(report.mean_elements <= sc.capacity);
  CHECK(report.mean_deletions >= 0.0);
  CHECK(report.mean_deletions <= report.mean_elements);
  CHECK(report.control_volume > 0.0);
  CHECK(report.control_volume_bits() ==
        doctest::Approx(report.control_volume * 16.0));
  for (int i = 0; i < sc.neighbor_count(); ++i) {
    CHECK(report.neighbor_relevance[i] <= report.cycle_relevance[i]);
    CHECK(report.full_dump_loss[i] >= 0.0);
    CHECK(report.full_dump_loss[i] <= 1.0);
    CHECK(report.diff_loss[i] >= 0.0);
    CHECK(report.diff_loss[i] <= 1.0);
  }
  CHECK(report.relevance_all <=
        *std::min_element(report.neighbor_relevance.begin(),
                          report.neighbor_relevance.end()));
  CHECK_FALSE(report.startup_approx_warning);
  const AnalyticReport warned =
      analytic_report(sc, ProtocolParams::incremental(101, 2, 1), pi);
  CHECK(warned.startup_approx_warning);
}

TEST_SUITE_END();
