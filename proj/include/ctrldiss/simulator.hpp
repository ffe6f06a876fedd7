#ifndef CTRLDISS_SIMULATOR_HPP
#define CTRLDISS_SIMULATOR_HPP

#include <cstdint>
#include <vector>

#include "ctrldiss/params.hpp"
#include "ctrldiss/tuner.hpp"

namespace ctrldiss {

enum class MessageKind { FullDump, Differential };

/// A neighbor's view of the sender's state.
struct NeighborState {
  double ber = 0.0;
  double connected_until = 0.0;  ///< continuous slot time; +inf when churn free
  bool has_full_dump_base = false;
  bool relevant = false;
  long long joined_at = 0;
};

/// Applies one message outcome to a neighbor's view.
///
/// A received full dump always restores relevance; a lost one invalidates the
/// baseline until the next dump. A received differential keeps an
/// incremental neighbor relevant only if it already was, while a cumulative
/// differential re-synchronizes any neighbor that still holds the latest
/// dump. Any loss makes the view irrelevant.
void receive(NeighborState& neighbor, MessageKind kind, bool success,
             Strategy strategy);

/// Element-count bookkeeping between full dumps. Elements are anonymous;
/// only the counts of dump-era survivors and post-dump additions are needed
/// to size every message kind.
struct DeltaLog {
  long long dump_survivors = 0;   ///< elements covered by the last dump, still live
  long long fresh_live = 0;       ///< elements added since the dump, still live
  long long dump_deleted = 0;     ///< dump-era elements since deleted
  long long adds_since_dump = 0;  ///< every addition since the dump
  long long deletes_since_dump = 0;
  long long slot_adds = 0;
  long long slot_deletes = 0;

  long long live() const { return dump_survivors + fresh_live; }

  void begin_slot();
  void record_deletes(long long from_dump_era, long long from_fresh);
  void record_adds(long long count);
  /// Re-baselines the log; call after a full dump has been composed.
  void on_full_dump();

  /// Size in elements of the message for the current slot. A cumulative
  /// differential normally cancels add+delete pairs that both happened
  /// after the dump (the neighbor needs neither); cancel_pairs=false keeps
  /// them for sensitivity studies.
  long long message_size(Strategy strategy, MessageKind kind,
                         bool cancel_pairs = true) const;
};

struct SimOptions {
  long long horizon = 1000000;  ///< slots per run
  long long warmup = -1;        ///< excluded slots; negative = 10 / expiry_rate
  int runs = 20;
  std::uint64_t seed = 1;
  bool cumulative_cancel_pairs = true;
  int threads = 0;  ///< concurrent runs; 0 = hardware concurrency
};

struct RunStats {
  double mean_volume = 0.0;
  double mean_relevance = 0.0;
  double mean_adds = 0.0;
  double mean_deletes = 0.0;
};

struct SimulationReport {
  double mean_volume = 0.0;     ///< elements per slot, copies included
  double mean_relevance = 0.0;  ///< fraction of slots with every neighbor relevant
  double volume_ci_halfwidth = 0.0;     ///< 95% normal approximation across runs
  double relevance_ci_halfwidth = 0.0;
  double mean_adds = 0.0;
  double mean_deletes = 0.0;
  long long horizon = 0;
  long long warmup = 0;
  int runs = 0;
  std::uint64_t seed = 0;
  std::vector<RunStats> per_run;
};

/// Slot-based simulation of one sender broadcasting to churning lossy
/// neighbors. Runs are independent (separate derived seeds) and may execute
/// concurrently; aggregation order is fixed by run index, so reports are
/// reproducible for a given (seed, params) regardless of thread count.
SimulationReport simulate(const ScenarioParams& scenario,
                          const ProtocolParams& protocol,
                          const SimOptions& options);

/// Per-slot trace of a single run, for debugging and equivalence checks.
/// The format is not a stable interface.
struct SlotRecord {
  long long slot = 0;
  MessageKind kind = MessageKind::FullDump;
  long long size = 0;
  int copies = 0;
  std::vector<std::uint8_t> delivered;  ///< per neighbor
  bool all_relevant = false;
  long long store_size = 0;
};

std::vector<SlotRecord> simulate_trace(const ScenarioParams& scenario,
                                       const ProtocolParams& protocol,
                                       long long horizon, std::uint64_t seed,
                                       int run_index = 0,
                                       bool cumulative_cancel_pairs = true);

/// Store dynamics only, no messaging: normalized occupancy histogram of the
/// tracked-element count over the post-warmup slots.
std::vector<double> occupancy_histogram(const ScenarioParams& scenario,
                                        long long slots, long long warmup,
                                        std::uint64_t seed);

/// Search options for the simulation-driven tuner used by the strategy
/// comparison (the cumulative strategy has no analytic model).
struct SimSearchOptions {
  int retry_limit = 7;
  int period_limit = 1000;
  long long horizon = 30000;
  long long warmup = -1;
  int runs = 3;
  std::uint64_t seed = 1;
  int threads = 0;
};

struct SimTuningResult {
  bool feasible = false;
  ProtocolParams best;
  double volume = 0.0;
  double relevance = 0.0;
  long long simulations = 0;
  int n_max = 0;
};

/// Finds a low-volume feasible triple for one strategy by simulating
/// candidates on a pruned grid: periods on a geometric ladder, minimal
/// feasible retry counts per period (relevance is monotone in both retry
/// counts, volume strictly increasing).
SimTuningResult tune_by_simulation(const ScenarioParams& scenario,
                                   Strategy strategy,
                                   const SimSearchOptions& options);

struct CompareCell {
  double load = 0.0;
  double expiry_rate = 0.0;
  Strategy strategy = Strategy::Incremental;
  SimTuningResult result;
};

/// Fills the (load, expiry rate) grid for both differential strategies.
std::vector<CompareCell> compare_strategies(const ScenarioParams& base,
                                            const std::vector<double>& load_grid,
                                            const std::vector<double>& mu_grid,
                                            const SimSearchOptions& options);

}  // namespace ctrldiss

#endif  // CTRLDISS_SIMULATOR_HPP
