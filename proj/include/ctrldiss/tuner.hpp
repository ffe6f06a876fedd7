#ifndef CTRLDISS_TUNER_HPP
#define CTRLDISS_TUNER_HPP

#include <iosfwd>
#include <optional>
#include <vector>

#include "ctrldiss/params.hpp"
#include "ctrldiss/stationary.hpp"

namespace ctrldiss {

enum class TuneMode { Exact, Asymptotic };

std::string to_string(TuneMode mode);
TuneMode tune_mode_from_string(const std::string& name);

struct TuneOptions {
  TuneMode mode = TuneMode::Exact;
  int retry_limit = 7;    ///< search box for both retry counts
  int period_limit = 1000; ///< cap on the full dump period when churn is zero
  int period_cap = 0;      ///< extra cap on the period (0 = none); 1 tunes the
                           ///< plain full-dump approach
};

/// One evaluated candidate of the search grid.
struct TuneCandidate {
  ProtocolParams protocol;
  double volume = 0.0;
  double relevance = 0.0;
  bool feasible = false;
};

struct TuningResult {
  bool feasible = false;
  std::optional<ProtocolParams> best;
  std::optional<double> best_volume;
  std::optional<double> best_relevance;
  long long evaluated = 0;
  int n_max = 0;  ///< period search bound actually used
  /// Set when the optimum sits on the retry boundary; the true optimum may
  /// need a larger retry_limit.
  bool at_retry_limit = false;
};

/// Largest full dump period whose startup gaps alone still permit the
/// relevance target across all neighbors; 0 means no period works.
int n_max(double churn_rate, int neighbors, double relevance_threshold);

/// Exhaustive search over (period, full retries, diff retries) minimizing
/// mean control volume subject to the all-neighbors relevance threshold.
/// The stationary solve (Exact mode) happens once per scenario. Ties are
/// broken deterministically; see tie_break.
TuningResult tune(const ScenarioParams& scenario, const TuneOptions& options = {},
                  std::ostream* trace_csv = nullptr);

/// Deterministic winner among equal-volume feasible candidates: highest
/// relevance, then smallest period, then smallest retry counts.
ProtocolParams tie_break(const std::vector<TuneCandidate>& candidates);

}  // namespace ctrldiss

#endif  // CTRLDISS_TUNER_HPP
