#ifndef CTRLDISS_ANALYTIC_HPP
#define CTRLDISS_ANALYTIC_HPP

#include <vector>

#include "ctrldiss/params.hpp"
#include "ctrldiss/stationary.hpp"

namespace ctrldiss {

/// Closed-form performance figures for a (scenario, protocol) pair.
/// Loss and relevance probabilities are per neighbor, index-aligned with
/// ScenarioParams::neighbor_ber.
struct AnalyticReport {
  double mean_elements = 0.0;   ///< stationary mean tracked elements
  double mean_deletions = 0.0;  ///< mean deletions per slot
  std::vector<double> full_dump_loss;  ///< after all full-dump retries
  std::vector<double> diff_loss;       ///< after all differential retries
  std::vector<double> cycle_relevance; ///< within one full dump cycle
  std::vector<double> neighbor_relevance;
  double relevance_all = 1.0;   ///< product over neighbors
  double control_volume = 0.0;  ///< mean control volume, elements/slot
  long long element_bits = 1;

  double control_volume_bits() const { return control_volume * static_cast<double>(element_bits); }

  /// The startup-gap factor is a first-order approximation; set when
  /// churn_rate * full_dump_period exceeds 0.1 and the factor starts to
  /// carry visible error.
  bool startup_approx_warning = false;
};

/// Stationary mean of the tracked-element count.
double mean_elements(const StationaryDistribution& pi);

/// Mean elements deleted per slot under the stationary law. Equals
/// (1 - exp(-expiry_rate)) * mean_elements by linearity of the binomial mean.
double mean_deletions(const StationaryDistribution& pi, double expiry_rate);

/// Mean control volume in elements/slot:
/// full dumps of mean size avg_r every period, differentials of mean size
/// 2*avg_d in the remaining slots, each multiplied by its retry count.
/// The cumulative strategy has no closed form and is rejected.
double avg_control_volume(double avg_elements, double avg_deletions,
                          const ProtocolParams& protocol);

/// Probability that all retries of a full dump are lost at one neighbor.
double loss_prob_full(const StationaryDistribution& pi, double ber,
                      long long element_bits, int retries);

/// Probability that all retries of a differential update are lost at one
/// neighbor; averages the message-loss probability over the joint law of
/// (tracked, deleted, added) counts, message size deleted + added.
double loss_prob_diff(const StationaryDistribution& pi,
                      const ScenarioParams& scenario, double ber, int retries);

/// Probability the neighbor holds relevant information at a uniformly chosen
/// slot of one full dump cycle.
double relevance_per_cycle(double full_dump_loss, double diff_loss, int period);

/// Cycle relevance discounted by the expected startup gap of a freshly
/// connected neighbor. Throws std::domain_error once the mean gap reaches
/// the mean connected-phase duration (churn_rate * period / 2 >= 1).
double relevance_per_neighbor(double cycle_relevance, double churn_rate, int period);

/// All-neighbors relevance: product of the per-neighbor values.
double relevance_all(const std::vector<double>& per_neighbor);

/// Full report from the exact pipeline; `pi` must come from this scenario.
AnalyticReport analytic_report(const ScenarioParams& scenario,
                               const ProtocolParams& protocol,
                               const StationaryDistribution& pi);

/// Saturated-store shortcut: the tracked count is pinned at capacity, so no
/// stationary solve is needed and the arrival rate is ignored.
AnalyticReport asymptotic_report(const ScenarioParams& scenario,
                                 const ProtocolParams& protocol);

}  // namespace ctrldiss

#endif  // CTRLDISS_ANALYTIC_HPP
