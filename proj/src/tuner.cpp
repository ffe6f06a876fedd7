#include "ctrldiss/tuner.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "ctrldiss/analytic.hpp"
#include "ctrldiss/probability.hpp"

namespace ctrldiss {

std::string to_string(TuneMode mode) {
  return mode == TuneMode::Exact ? "exact" : "asymptotic";
}

TuneMode tune_mode_from_string(const std::string& name) {
  if (name == "exact") return TuneMode::Exact;
  if (name == "asymptotic") return TuneMode::Asymptotic;
  throw std::invalid_argument("unknown mode '" + name +
                              "' (expected exact|asymptotic)");
}

int n_max(double churn_rate, int neighbors, double relevance_threshold) {
  if (!(churn_rate > 0.0))
    throw std::domain_error("n_max: churn rate must be > 0");
  if (neighbors < 1) throw std::domain_error("n_max: need at least one neighbor");
  if (!(relevance_threshold > 0.0 && relevance_threshold < 1.0))
    throw std::domain_error("n_max: threshold must be in (0, 1)");
  const double root = std::pow(relevance_threshold, 1.0 / neighbors);
  return static_cast<int>(std::floor(2.0 * (1.0 - root) / churn_rate));
}

namespace {

// Strictly-better-than comparison implementing the deterministic tie-break:
// lower volume wins; volumes equal within 1e-12 relative fall through to
// higher relevance, then smaller period and retry counts.
bool improves(const TuneCandidate& cand, const TuneCandidate& best) {
  const double scale = std::max(std::abs(cand.volume), std::abs(best.volume));
  if (std::abs(cand.volume - best.volume) > 1e-12 * scale)
    return cand.volume < best.volume;
  if (cand.relevance != best.relevance) return cand.relevance > best.relevance;
  if (cand.protocol.full_dump_period != best.protocol.full_dump_period)
    return cand.protocol.full_dump_period < best.protocol.full_dump_period;
  if (cand.protocol.full_dump_retries != best.protocol.full_dump_retries)
    return cand.protocol.full_dump_retries < best.protocol.full_dump_retries;
  return cand.protocol.diff_retries < best.protocol.diff_retries;
}

struct BaseLosses {
  double avg_elements = 0.0;
  double avg_deletions = 0.0;
  std::vector<double> full;  // per neighbor, single attempt
  std::vector<double> diff;
};

BaseLosses base_losses(const ScenarioParams& scenario, TuneMode mode) {
  BaseLosses out;
  const int neighbors = scenario.neighbor_count();
  out.full.resize(neighbors);
  out.diff.resize(neighbors);
  // Either mode reduces a candidate evaluation to powers of these bases, so
  // the whole grid reuses one stationary solve (or none).
  const ProtocolParams probe = ProtocolParams::incremental(1, 1, 1);
  if (mode == TuneMode::Exact) {
    const StationaryDistribution pi = solve_stationary(build_kernel(scenario));
    const AnalyticReport report = analytic_report(scenario, probe, pi);
    out.avg_elements = report.mean_elements;
    out.avg_deletions = report.mean_deletions;
    out.full = report.full_dump_loss;
    out.diff = report.diff_loss;
  } else {
    const AnalyticReport report = asymptotic_report(scenario, probe);
    out.avg_elements = report.mean_elements;
    out.avg_deletions = report.mean_deletions;
    out.full = report.full_dump_loss;
    out.diff = report.diff_loss;
  }
  return out;
}

}  // namespace

TuningResult tune(const ScenarioParams& scenario, const TuneOptions& options,
                  std::ostream* trace_csv) {
  scenario.validate();
  if (options.retry_limit < 1)
    throw std::invalid_argument("tune: retry_limit must be >= 1");

  TuningResult result;
  // period_limit both stands in for the unbounded churn-free case and keeps
  // the search tractable when churn is vanishingly small.
  int period_bound = options.period_limit;
  if (scenario.churn_rate > 0.0)
    period_bound = std::min(period_bound,
                            n_max(scenario.churn_rate, scenario.neighbor_count(),
                                  scenario.relevance_threshold));
  if (options.period_cap > 0) period_bound = std::min(period_bound, options.period_cap);
  result.n_max = period_bound;
  if (period_bound < 1) return result;  // infeasible before any evaluation

  const BaseLosses bases = base_losses(scenario, options.mode);
  const int neighbors = scenario.neighbor_count();
  const int retry_limit = options.retry_limit;

  // Retry powers per neighbor; index [i][k-1] = base^k.
  std::vector<std::vector<double>> pow_full(neighbors), pow_diff(neighbors);
  for (int i = 0; i < neighbors; ++i) {
    pow_full[i].resize(retry_limit);
    pow_diff[i].resize(retry_limit);
    double f = 1.0, d = 1.0;
    for (int k = 0; k < retry_limit; ++k) {
      f *= bases.full[i];
      d *= bases.diff[i];
      pow_full[i][k] = f;
      pow_diff[i][k] = d;
    }
  }

  if (trace_csv) (*trace_csv) << "N,n_f,n_d,volume,relevance,feasible\n";

  TuneCandidate best;
  bool have_best = false;
  for (int period = 1; period <= period_bound; ++period) {
    for (int rf = 1; rf <= retry_limit; ++rf) {
      for (int rd = 1; rd <= retry_limit; ++rd) {
        TuneCandidate cand;
        cand.protocol = ProtocolParams::incremental(period, rf, rd);
        cand.volume = avg_control_volume(bases.avg_elements, bases.avg_deletions,
                                         cand.protocol);
        double rel = 1.0;
        for (int i = 0; i < neighbors; ++i) {
          const double cycle = relevance_per_cycle(pow_full[i][rf - 1],
                                                   pow_diff[i][rd - 1], period);
          rel *= relevance_per_neighbor(cycle, scenario.churn_rate, period);
        }
        cand.relevance = rel;
        cand.feasible = rel >= scenario.relevance_threshold;
        ++result.evaluated;
        if (trace_csv) {
          char buf[96];
          std::snprintf(buf, sizeof buf, "%d,%d,%d,%.12g,%.12g,%d", period, rf,
                        rd, cand.volume, cand.relevance, cand.feasible ? 1 : 0);
          (*trace_csv) << buf << '\n';
        }
        if (cand.feasible && (!have_best || improves(cand, best))) {
          best = cand;
          have_best = true;
        }
      }
    }
  }

  if (have_best) {
    result.feasible = true;
    result.best = best.protocol;
    result.best_volume = best.volume;
    result.best_relevance = best.relevance;
    result.at_retry_limit = best.protocol.full_dump_retries == retry_limit ||
                            best.protocol.diff_retries == retry_limit;
  }
  return result;
}

ProtocolParams tie_break(const std::vector<TuneCandidate>& candidates) {
  if (candidates.empty())
    throw std::invalid_argument("tie_break: empty candidate set");
  const TuneCandidate* best = &candidates.front();
  for (const TuneCandidate& cand : candidates) {
    const double scale = std::max(std::abs(cand.volume), std::abs(best->volume));
    if (std::abs(cand.volume - best->volume) > 1e-12 * scale)
      throw std::invalid_argument("tie_break: candidates differ in volume");
  }
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (improves(candidates[i], *best)) best = &candidates[i];
  return best->protocol;
}

}  // namespace ctrldiss
