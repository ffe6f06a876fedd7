#include "ctrldiss/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "ctrldiss/probability.hpp"

namespace ctrldiss {

namespace {

// Base (single-attempt) loss probability of a full dump at one neighbor.
double full_dump_base_loss(const StationaryDistribution& pi, double ber,
                           long long element_bits) {
  double base = 0.0;
  for (int r = 0; r < pi.states(); ++r) {
    if (pi.pi[r] == 0.0) continue;
    base += pi.pi[r] * message_loss_prob(ber, r, element_bits);
  }
  return base;
}

// Base loss probability of a differential update at one neighbor:
// E[p_err(deleted + added)] over the stationary joint law. The message-loss
// model makes the inner sums geometric in q = (1-ber)^element_bits, so each
// term only needs one extra multiply.
double diff_base_loss(const StationaryDistribution& pi,
                      const ScenarioParams& scenario, double ber) {
  if (ber == 0.0) return 0.0;
  const int capacity = scenario.capacity;
  const double q = std::exp(static_cast<double>(scenario.element_bits) *
                            std::log1p(-ber));
  const detail::PoissonTable pois(scenario.arrival_rate, capacity);

  double base = 0.0;
  for (int r = 0; r < pi.states(); ++r) {
    const double weight = pi.pi[r];
    if (weight == 0.0) continue;
    const std::vector<double> del = detail::deletion_row(r, scenario.expiry_rate);
    double survive_r = 0.0;  // E[q^(deleted+added) | r]
    double q_del = 1.0;      // q^d, carried along the d loop
    for (int d = 0; d <= r; ++d, q_del *= q) {
      const double p_del = del[d];
      if (p_del == 0.0) continue;
      const int bound = capacity + d - r;
      double survive_n = 0.0;  // E[q^added | r, d]
      if (bound == 0) {
        survive_n = 1.0;
      } else {
        double q_pow = 1.0;
        int n = 0;
        for (; n < bound; ++n) {
          survive_n += pois.pmf[n] * q_pow;
          q_pow *= q;
          if (pois.tail[n + 1] < 1e-16) {
            ++n;
            break;
          }
        }
        if (n >= bound) survive_n += pois.tail[bound] * q_pow;
      }
      survive_r += p_del * q_del * survive_n;
    }
    base += weight * (1.0 - survive_r);
  }
  return base;
}

void check_retries(int retries) {
  if (retries < 1) throw std::domain_error("retry count must be >= 1");
}

}  // namespace

double mean_elements(const StationaryDistribution& pi) { return pi.mean(); }

double mean_deletions(const StationaryDistribution& pi, double expiry_rate) {
  return -std::expm1(-expiry_rate) * pi.mean();
}

double avg_control_volume(double avg_elements, double avg_deletions,
                          const ProtocolParams& protocol) {
  protocol.validate();
  if (protocol.strategy == Strategy::Cumulative)
    throw std::invalid_argument(
        "avg_control_volume: no closed form for the cumulative strategy; "
        "use the simulator");
  const double period = protocol.full_dump_period;
  return protocol.full_dump_retries * avg_elements / period +
         2.0 * ((period - 1.0) / period) * protocol.diff_retries * avg_deletions;
}

double loss_prob_full(const StationaryDistribution& pi, double ber,
                      long long element_bits, int retries) {
  check_retries(retries);
  return std::pow(full_dump_base_loss(pi, ber, element_bits), retries);
}

double loss_prob_diff(const StationaryDistribution& pi,
                      const ScenarioParams& scenario, double ber, int retries) {
  check_retries(retries);
  return std::pow(diff_base_loss(pi, scenario, ber), retries);
}

double relevance_per_cycle(double full_dump_loss, double diff_loss, int period) {
  if (period < 1) throw std::domain_error("relevance_per_cycle: period must be >= 1");
  const double dump_ok = 1.0 - full_dump_loss;
  // A one-slot cycle has no differentials; below ~1e-12 the geometric sum
  // is 1 to working precision (0/0 limit of the closed form).
  if (period == 1 || diff_loss < 1e-12) return dump_ok;
  const double cycle = -std::expm1(period * std::log1p(-diff_loss));
  return dump_ok * cycle / (period * diff_loss);
}

double relevance_per_neighbor(double cycle_relevance, double churn_rate,
                              int period) {
  const double gap_fraction = churn_rate * period / 2.0;
  if (gap_fraction >= 1.0)
    throw std::domain_error(
        "relevance_per_neighbor: full dump cycle exceeds the mean connected "
        "phase (churn_rate * period / 2 >= 1)");
  return cycle_relevance * (1.0 - gap_fraction);
}

double relevance_all(const std::vector<double>& per_neighbor) {
  double product = 1.0;
  for (double p : per_neighbor) product *= p;
  return product;
}

namespace {

AnalyticReport assemble_report(const ScenarioParams& scenario,
                               const ProtocolParams& protocol,
                               double avg_elements, double avg_deletions,
                               const std::vector<double>& base_full,
                               const std::vector<double>& base_diff) {
  const int neighbors = scenario.neighbor_count();
  AnalyticReport report;
  report.mean_elements = avg_elements;
  report.mean_deletions = avg_deletions;
  report.element_bits = scenario.element_bits;
  report.full_dump_loss.resize(neighbors);
  report.diff_loss.resize(neighbors);
  report.cycle_relevance.resize(neighbors);
  report.neighbor_relevance.resize(neighbors);
  for (int i = 0; i < neighbors; ++i) {
    report.full_dump_loss[i] = std::pow(base_full[i], protocol.full_dump_retries);
    report.diff_loss[i] = std::pow(base_diff[i], protocol.diff_retries);
    report.cycle_relevance[i] = relevance_per_cycle(
        report.full_dump_loss[i], report.diff_loss[i], protocol.full_dump_period);
    report.neighbor_relevance[i] = relevance_per_neighbor(
        report.cycle_relevance[i], scenario.churn_rate, protocol.full_dump_period);
  }
  report.relevance_all = relevance_all(report.neighbor_relevance);
  report.control_volume = avg_control_volume(avg_elements, avg_deletions, protocol);
  report.startup_approx_warning =
      scenario.churn_rate * protocol.full_dump_period > 0.1;
  return report;
}

}  // namespace

AnalyticReport analytic_report(const ScenarioParams& scenario,
                               const ProtocolParams& protocol,
                               const StationaryDistribution& pi) {
  scenario.validate();
  protocol.validate();
  if (pi.states() != scenario.capacity + 1)
    throw std::invalid_argument(
        "analytic_report: stationary distribution does not match the scenario");

  const int neighbors = scenario.neighbor_count();
  std::vector<double> base_full(neighbors), base_diff(neighbors);
  for (int i = 0; i < neighbors; ++i) {
    base_full[i] = full_dump_base_loss(pi, scenario.neighbor_ber[i],
                                       scenario.element_bits);
    base_diff[i] = diff_base_loss(pi, scenario, scenario.neighbor_ber[i]);
  }
  return assemble_report(scenario, protocol, mean_elements(pi),
                         mean_deletions(pi, scenario.expiry_rate), base_full,
                         base_diff);
}

AnalyticReport asymptotic_report(const ScenarioParams& scenario,
                                 const ProtocolParams& protocol) {
  scenario.validate();
  protocol.validate();

  const int capacity = scenario.capacity;
  const double death_prob = -std::expm1(-scenario.expiry_rate);
  const double avg_deletions = death_prob * capacity;

  const int neighbors = scenario.neighbor_count();
  std::vector<double> base_full(neighbors), base_diff(neighbors);
  for (int i = 0; i < neighbors; ++i) {
    const double ber = scenario.neighbor_ber[i];
    base_full[i] = message_loss_prob(ber, capacity, scenario.element_bits);
    // At capacity every deletion is replaced, so a differential carries 2d
    // elements; E[q^(2d)] over the binomial deletion count is its moment
    // generating function, which collapses the sum to a single power.
    const double two_loss = message_loss_prob(ber, 2, scenario.element_bits);
    base_diff[i] =
        -std::expm1(capacity * std::log1p(-death_prob * two_loss));
  }
  return assemble_report(scenario, protocol, static_cast<double>(capacity),
                         avg_deletions, base_full, base_diff);
}

}  // namespace ctrldiss
