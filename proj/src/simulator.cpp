#include "ctrldiss/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

#include "ctrldiss/probability.hpp"
#include "ctrldiss/rng.hpp"

namespace ctrldiss {

void receive(NeighborState& neighbor, MessageKind kind, bool success,
             Strategy strategy) {
  if (kind == MessageKind::FullDump) {
    neighbor.has_full_dump_base = success;
    neighbor.relevant = success;
    return;
  }
  if (!success) {
    neighbor.relevant = false;
    return;
  }
  if (strategy == Strategy::Cumulative) {
    // Covers everything since the dump, so it heals earlier losses as long
    // as the dump itself arrived.
    neighbor.relevant = neighbor.has_full_dump_base;
  }
  // Incremental: a successful differential only preserves relevance.
}

void DeltaLog::begin_slot() {
  slot_adds = 0;
  slot_deletes = 0;
}

void DeltaLog::record_deletes(long long from_dump_era, long long from_fresh) {
  dump_survivors -= from_dump_era;
  fresh_live -= from_fresh;
  dump_deleted += from_dump_era;
  deletes_since_dump += from_dump_era + from_fresh;
  slot_deletes += from_dump_era + from_fresh;
}

void DeltaLog::record_adds(long long count) {
  fresh_live += count;
  adds_since_dump += count;
  slot_adds += count;
}

void DeltaLog::on_full_dump() {
  dump_survivors = live();
  fresh_live = 0;
  dump_deleted = 0;
  adds_since_dump = 0;
  deletes_since_dump = 0;
}

long long DeltaLog::message_size(Strategy strategy, MessageKind kind,
                                 bool cancel_pairs) const {
  if (kind == MessageKind::FullDump) return live();
  if (strategy == Strategy::Cumulative)
    return cancel_pairs ? fresh_live + dump_deleted
                        : adds_since_dump + deletes_since_dump;
  return slot_adds + slot_deletes;
}

namespace {

struct RunAccumulator {
  double volume = 0.0;
  long long relevant_slots = 0;
  long long adds = 0;
  long long deletes = 0;
  long long counted_slots = 0;
};

long long default_warmup(const ScenarioParams& scenario, long long horizon) {
  long long w = std::llround(10.0 / scenario.expiry_rate);
  if (w >= horizon) w = horizon / 10;
  return w;
}

struct SlotSink {
  std::vector<SlotRecord>* trace = nullptr;
};

// One independent simulation run. Draws come from four substreams (arrivals,
// deaths, per-neighbor channel, per-neighbor churn) so that coupled
// experiments can vary one concern without disturbing the others; for the
// same reason every transmission consumes exactly `copies` channel draws per
// neighbor instead of stopping at the first delivered copy.
RunStats run_once(const ScenarioParams& scenario, const ProtocolParams& protocol,
                  long long horizon, long long warmup, std::uint64_t seed,
                  int run_index, bool cancel_pairs, SlotSink sink = {}) {
  const double death_prob = -std::expm1(-scenario.expiry_rate);
  const int neighbor_count = scenario.neighbor_count();
  const int period =
      protocol.strategy == Strategy::FullDumpOnly ? 1 : protocol.full_dump_period;

  Rng arrivals(substream_seed(seed, run_index, stream::kArrivals));
  Rng deaths(substream_seed(seed, run_index, stream::kDeaths));
  std::vector<Rng> channel;
  std::vector<Rng> churn;
  channel.reserve(neighbor_count);
  churn.reserve(neighbor_count);
  for (int i = 0; i < neighbor_count; ++i) {
    channel.emplace_back(substream_seed(seed, run_index, stream::kChannel, i));
    churn.emplace_back(substream_seed(seed, run_index, stream::kChurn, i));
  }

  DeltaLog log;
  std::vector<NeighborState> neighbors(neighbor_count);
  for (int i = 0; i < neighbor_count; ++i) {
    neighbors[i].ber = scenario.neighbor_ber[i];
    neighbors[i].joined_at = 0;
    neighbors[i].connected_until = churn[i].exponential(scenario.churn_rate);
  }

  RunAccumulator acc;
  std::vector<std::uint8_t> delivered(neighbor_count);

  for (long long t = 0; t < horizon; ++t) {
    log.begin_slot();

    // Deaths: each live element independently, dump-era bucket first so the
    // draw order is deterministic.
    const long long gone_dump = deaths.binomial_count(log.dump_survivors, death_prob);
    const long long gone_fresh = deaths.binomial_count(log.fresh_live, death_prob);
    log.record_deletes(gone_dump, gone_fresh);

    // Arrivals, admitted up to the remaining capacity.
    const long long wanted = arrivals.poisson(scenario.arrival_rate);
    const long long admitted = std::min(wanted, scenario.capacity - log.live());
    log.record_adds(admitted);

    // Compose and transmit this slot's message.
    const MessageKind kind =
        (t % period == 0) ? MessageKind::FullDump : MessageKind::Differential;
    const long long size = log.message_size(protocol.strategy, kind, cancel_pairs);
    const int copies = kind == MessageKind::FullDump ? protocol.full_dump_retries
                                                     : protocol.diff_retries;
    for (int i = 0; i < neighbor_count; ++i) {
      const double p_err = message_loss_prob(neighbors[i].ber, size,
                                             scenario.element_bits);
      bool got_it = false;
      for (int c = 0; c < copies; ++c)
        got_it |= channel[i].next_double() >= p_err;
      delivered[i] = got_it ? 1 : 0;
      receive(neighbors[i], kind, got_it, protocol.strategy);
    }
    if (kind == MessageKind::FullDump) log.on_full_dump();

    // Churn: departed neighbors are replaced immediately, keeping the
    // population constant; replacements start without a dump baseline.
    const double slot_end = static_cast<double>(t + 1);
    for (int i = 0; i < neighbor_count; ++i) {
      if (neighbors[i].connected_until <= slot_end) {
        neighbors[i].has_full_dump_base = false;
        neighbors[i].relevant = false;
        neighbors[i].joined_at = t + 1;
        neighbors[i].connected_until =
            slot_end + churn[i].exponential(scenario.churn_rate);
      }
    }

    bool all_relevant = true;
    for (const NeighborState& nb : neighbors) all_relevant &= nb.relevant;

    if (t >= warmup) {
      acc.volume += static_cast<double>(copies) * static_cast<double>(size);
      acc.relevant_slots += all_relevant ? 1 : 0;
      acc.adds += log.slot_adds;
      acc.deletes += log.slot_deletes;
      ++acc.counted_slots;
    }
    if (sink.trace) {
      SlotRecord rec;
      rec.slot = t;
      rec.kind = kind;
      rec.size = size;
      rec.copies = copies;
      rec.delivered = delivered;
      rec.all_relevant = all_relevant;
      rec.store_size = log.live();
      sink.trace->push_back(std::move(rec));
    }
  }

  RunStats stats;
  const double n = static_cast<double>(acc.counted_slots);
  stats.mean_volume = acc.volume / n;
  stats.mean_relevance = static_cast<double>(acc.relevant_slots) / n;
  stats.mean_adds = static_cast<double>(acc.adds) / n;
  stats.mean_deletes = static_cast<double>(acc.deletes) / n;
  return stats;
}

double ci_halfwidth(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double stddev = std::sqrt(ss / (values.size() - 1));
  return 1.96 * stddev / std::sqrt(static_cast<double>(values.size()));
}

}  // namespace

SimulationReport simulate(const ScenarioParams& scenario,
                          const ProtocolParams& protocol,
                          const SimOptions& options) {
  scenario.validate();
  protocol.validate();
  if (options.runs < 1) throw std::invalid_argument("simulate: runs must be >= 1");
  const long long warmup = options.warmup >= 0
                               ? options.warmup
                               : default_warmup(scenario, options.horizon);
  if (!(options.horizon > warmup))
    throw std::invalid_argument("simulate: horizon must exceed warmup");

  SimulationReport report;
  report.horizon = options.horizon;
  report.warmup = warmup;
  report.runs = options.runs;
  report.seed = options.seed;
  report.per_run.resize(options.runs);

  int threads = options.threads > 0
                    ? options.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, options.runs));

  if (threads == 1) {
    for (int run = 0; run < options.runs; ++run)
      report.per_run[run] =
          run_once(scenario, protocol, options.horizon, warmup, options.seed,
                   run, options.cumulative_cancel_pairs);
  } else {
    std::atomic<int> next_run{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (int run = next_run.fetch_add(1); run < options.runs;
             run = next_run.fetch_add(1)) {
          report.per_run[run] =
              run_once(scenario, protocol, options.horizon, warmup, options.seed,
                       run, options.cumulative_cancel_pairs);
        }
      });
    }
    for (std::thread& th : pool) th.join();
  }

  // Aggregate in run order; results do not depend on scheduling.
  std::vector<double> volumes(options.runs), relevances(options.runs);
  for (int run = 0; run < options.runs; ++run) {
    volumes[run] = report.per_run[run].mean_volume;
    relevances[run] = report.per_run[run].mean_relevance;
    report.mean_volume += report.per_run[run].mean_volume;
    report.mean_relevance += report.per_run[run].mean_relevance;
    report.mean_adds += report.per_run[run].mean_adds;
    report.mean_deletes += report.per_run[run].mean_deletes;
  }
  report.mean_volume /= options.runs;
  report.mean_relevance /= options.runs;
  report.mean_adds /= options.runs;
  report.mean_deletes /= options.runs;
  report.volume_ci_halfwidth = ci_halfwidth(volumes, report.mean_volume);
  report.relevance_ci_halfwidth = ci_halfwidth(relevances, report.mean_relevance);
  return report;
}

std::vector<SlotRecord> simulate_trace(const ScenarioParams& scenario,
                                       const ProtocolParams& protocol,
                                       long long horizon, std::uint64_t seed,
                                       int run_index,
                                       bool cumulative_cancel_pairs) {
  scenario.validate();
  protocol.validate();
  std::vector<SlotRecord> trace;
  trace.reserve(static_cast<std::size_t>(horizon));
  SlotSink sink;
  sink.trace = &trace;
  run_once(scenario, protocol, horizon, /*warmup=*/0, seed, run_index,
           cumulative_cancel_pairs, sink);
  return trace;
}

std::vector<double> occupancy_histogram(const ScenarioParams& scenario,
                                        long long slots, long long warmup,
                                        std::uint64_t seed) {
  scenario.validate();
  if (!(slots > warmup && warmup >= 0))
    throw std::invalid_argument("occupancy_histogram: need slots > warmup >= 0");
  const double death_prob = -std::expm1(-scenario.expiry_rate);
  Rng arrivals(substream_seed(seed, 0, stream::kArrivals));
  Rng deaths(substream_seed(seed, 0, stream::kDeaths));

  std::vector<double> histogram(scenario.capacity + 1, 0.0);
  long long live = 0;
  for (long long t = 0; t < slots; ++t) {
    live -= deaths.binomial_count(live, death_prob);
    const long long wanted = arrivals.poisson(scenario.arrival_rate);
    live += std::min(wanted, scenario.capacity - live);
    if (t >= warmup) histogram[static_cast<std::size_t>(live)] += 1.0;
  }
  const double total = static_cast<double>(slots - warmup);
  for (double& h : histogram) h /= total;
  return histogram;
}

namespace {

// Candidate periods: everything when the bound is small, otherwise a
// geometric ladder that always contains 1..4 and the bound itself.
std::vector<int> period_ladder(int bound) {
  std::set<int> values;
  for (int n = 1; n <= std::min(bound, 4); ++n) values.insert(n);
  for (double x = bound; x >= 1.0; x /= 1.35) values.insert(static_cast<int>(x));
  values.insert(bound);
  return {values.begin(), values.end()};
}

}  // namespace

SimTuningResult tune_by_simulation(const ScenarioParams& scenario,
                                   Strategy strategy,
                                   const SimSearchOptions& options) {
  scenario.validate();
  SimTuningResult result;
  int bound = options.period_limit;
  if (scenario.churn_rate > 0.0)
    bound = std::min(bound, n_max(scenario.churn_rate, scenario.neighbor_count(),
                                  scenario.relevance_threshold));
  result.n_max = bound;
  if (bound < 1) return result;

  SimOptions sim;
  sim.horizon = options.horizon;
  sim.warmup = options.warmup;
  sim.runs = options.runs;
  sim.seed = options.seed;
  sim.threads = options.threads;

  const std::vector<int> ladder = period_ladder(bound);

  auto evaluate = [&](int period, int rf, int rd) {
    const ProtocolParams p{strategy, period, rf, rd};
    ++result.simulations;
    return simulate(scenario, p, sim);
  };

  bool have_best = false;
  // Scan periods from the bound downward: the incremental optimum tends to
  // sit near the bound, which makes the volume cutoffs bite early.
  for (auto it = ladder.rbegin(); it != ladder.rend(); ++it) {
    const int period = *it;
    for (int rf = 1; rf <= options.retry_limit; ++rf) {
      bool rf_exhausted = false;
      for (int rd = 1; rd <= options.retry_limit; ++rd) {
        const SimulationReport rep = evaluate(period, rf, rd);
        if (have_best && rep.mean_volume >= result.volume) {
          // More retries of either kind only add volume; nothing better
          // remains in this row, and for rd == 1 in the whole period.
          if (rd == 1) rf_exhausted = true;
          break;
        }
        if (rep.mean_relevance >= scenario.relevance_threshold) {
          result.best = ProtocolParams{strategy, period, rf, rd};
          result.volume = rep.mean_volume;
          result.relevance = rep.mean_relevance;
          result.feasible = true;
          have_best = true;
          break;  // larger rd in this row is dominated
        }
      }
      if (rf_exhausted) break;
    }
  }
  return result;
}

std::vector<CompareCell> compare_strategies(const ScenarioParams& base,
                                            const std::vector<double>& load_grid,
                                            const std::vector<double>& mu_grid,
                                            const SimSearchOptions& options) {
  if (load_grid.empty() || mu_grid.empty())
    throw std::invalid_argument("compare_strategies: grids must be non-empty");
  std::vector<CompareCell> cells;
  std::uint64_t cell_index = 0;
  for (double mu : mu_grid) {
    for (double load : load_grid) {
      ScenarioParams scenario = base;
      scenario.expiry_rate = mu;
      scenario = scenario.with_load(load);
      for (Strategy strategy : {Strategy::Incremental, Strategy::Cumulative}) {
        SimSearchOptions cell_options = options;
        cell_options.seed = substream_seed(options.seed, cell_index++, 0x5eedULL);
        CompareCell cell;
        cell.load = load;
        cell.expiry_rate = mu;
        cell.strategy = strategy;
        cell.result = tune_by_simulation(scenario, strategy, cell_options);
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

}  // namespace ctrldiss
