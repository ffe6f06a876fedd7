#include "ctrldiss/figures.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "ctrldiss/analytic.hpp"
#include "ctrldiss/simulator.hpp"

namespace ctrldiss {

namespace {

struct Csv {
  std::ostream& out;
  int precision;
  bool first = true;

  void cell(const std::string& v) {
    if (!first) out << ',';
    out << v;
    first = false;
  }
  void cell(double v) { cell(format_number(v, precision)); }
  void cell(long long v) { cell(std::to_string(v)); }
  void cell(int v) { cell(std::to_string(v)); }
  void cell_u64(std::uint64_t v) { cell(std::to_string(v)); }
  void empty() { cell(std::string()); }
  void endrow() {
    out << '\n';
    first = true;
  }
};

const char* kScenarioHeader =
    "scenario_hash,load,arrival_rate,expiry_rate,capacity,element_bits,"
    "churn_rate,neighbors,neighbor_ber,relevance_threshold";

void scenario_cells(Csv& csv, const ScenarioParams& s) {
  csv.cell_u64(s.hash());
  csv.cell(s.load());
  csv.cell(s.arrival_rate);
  csv.cell(s.expiry_rate);
  csv.cell(s.capacity);
  csv.cell(s.element_bits);
  csv.cell(s.churn_rate);
  csv.cell(s.neighbor_count());
  csv.cell(join_values(s.neighbor_ber, csv.precision));
  csv.cell(s.relevance_threshold);
}

void protocol_cells(Csv& csv, const ProtocolParams& p) {
  csv.cell(to_string(p.strategy));
  csv.cell(p.full_dump_period);
  csv.cell(p.full_dump_retries);
  csv.cell(p.diff_retries);
}

std::vector<double> sweep_points(const ExperimentConfig& config) {
  if (config.sweep) return config.sweep->values;
  return {std::numeric_limits<double>::quiet_NaN()};  // single unswept point
}

ScenarioParams point_scenario(const ExperimentConfig& config, double value) {
  if (!config.sweep) return config.scenario;
  return config.scenario_at(config.sweep->axis, value);
}

TuneOptions tune_options(const ExperimentConfig& config) {
  TuneOptions opts;
  opts.mode = config.protocol.mode;
  opts.retry_limit = config.protocol.retry_limit;
  opts.period_limit = config.protocol.period_limit;
  return opts;
}

// BER giving the requested loss probability for a capacity-sized message.
double ber_for_full_dump_loss(double loss, int capacity, long long element_bits) {
  return -std::expm1(std::log1p(-loss) /
                     (static_cast<double>(capacity) * element_bits));
}

std::uint64_t require_seed(const ExperimentConfig& config) {
  if (!config.run.seed)
    throw ConfigError("run.seed: required for simulation commands");
  return *config.run.seed;
}

}  // namespace

int cmd_analyze(const ExperimentConfig& config, std::ostream& out) {
  Csv csv{out, config.output.precision};
  out << "axis,axis_value," << kScenarioHeader
      << ",mode,feasible,strategy,full_dump_period,full_dump_retries,"
         "diff_retries,mean_elements,mean_deletions,full_dump_loss,diff_loss,"
         "cycle_relevance,neighbor_relevance,relevance_all,control_volume,"
         "control_volume_bits,startup_approx_warning,short_lifetime_warning\n";

  const std::string axis = config.sweep ? config.sweep->axis : "none";
  int rows = 0;
  for (double value : sweep_points(config)) {
    const ScenarioParams scenario = point_scenario(config, value);

    ProtocolParams protocol;
    bool feasible = true;
    if (config.protocol.tune) {
      const TuningResult tuned = tune(scenario, tune_options(config));
      feasible = tuned.feasible;
      if (feasible) protocol = *tuned.best;
    } else {
      protocol = config.protocol.fixed_triple();
    }

    csv.cell(axis);
    if (config.sweep)
      csv.cell(value);
    else
      csv.empty();
    scenario_cells(csv, scenario);
    csv.cell(to_string(config.protocol.mode));
    csv.cell(feasible ? 1 : 0);
    if (!feasible) {
      for (int i = 0; i < 17; ++i) csv.empty();
      csv.endrow();
      ++rows;
      continue;
    }
    protocol_cells(csv, protocol);

    AnalyticReport report;
    if (config.protocol.mode == TuneMode::Asymptotic) {
      report = asymptotic_report(scenario, protocol);
    } else {
      const StationaryDistribution pi = solve_stationary(build_kernel(scenario));
      report = analytic_report(scenario, protocol, pi);
    }
    csv.cell(report.mean_elements);
    csv.cell(report.mean_deletions);
    csv.cell(join_values(report.full_dump_loss, csv.precision));
    csv.cell(join_values(report.diff_loss, csv.precision));
    csv.cell(join_values(report.cycle_relevance, csv.precision));
    csv.cell(join_values(report.neighbor_relevance, csv.precision));
    csv.cell(report.relevance_all);
    csv.cell(report.control_volume);
    csv.cell(report.control_volume_bits());
    csv.cell(report.startup_approx_warning ? 1 : 0);
    csv.cell(scenario.short_lifetime_warning() ? 1 : 0);
    csv.endrow();
    ++rows;
  }
  return rows;
}

int cmd_tune(const ExperimentConfig& config, std::ostream& out,
             std::ostream* trace, bool* all_feasible) {
  Csv csv{out, config.output.precision};
  out << "axis,axis_value," << kScenarioHeader
      << ",mode,n_max,evaluated,feasible,strategy,full_dump_period,"
         "full_dump_retries,diff_retries,volume,relevance,at_retry_limit\n";

  const std::string axis = config.sweep ? config.sweep->axis : "none";
  if (all_feasible) *all_feasible = true;
  int rows = 0;
  for (double value : sweep_points(config)) {
    const ScenarioParams scenario = point_scenario(config, value);
    const TuningResult result = tune(scenario, tune_options(config), trace);
    if (all_feasible && !result.feasible) *all_feasible = false;

    csv.cell(axis);
    if (config.sweep)
      csv.cell(value);
    else
      csv.empty();
    scenario_cells(csv, scenario);
    csv.cell(to_string(config.protocol.mode));
    csv.cell(result.n_max);
    csv.cell(result.evaluated);
    csv.cell(result.feasible ? 1 : 0);
    if (result.feasible) {
      protocol_cells(csv, *result.best);
      csv.cell(*result.best_volume);
      csv.cell(*result.best_relevance);
      csv.cell(result.at_retry_limit ? 1 : 0);
    } else {
      for (int i = 0; i < 7; ++i) csv.empty();
    }
    csv.endrow();
    ++rows;
  }
  return rows;
}

int cmd_simulate(const ExperimentConfig& config, std::ostream& out) {
  Csv csv{out, config.output.precision};
  out << "axis,axis_value,row,run_index," << kScenarioHeader
      << ",strategy,full_dump_period,full_dump_retries,diff_retries,horizon,"
         "warmup,runs,seed,mean_volume,mean_relevance,volume_ci_halfwidth,"
         "relevance_ci_halfwidth,mean_adds,mean_deletes\n";

  SimOptions options;
  options.horizon = config.run.horizon;
  options.warmup = config.run.warmup;
  options.runs = config.run.runs;
  options.seed = require_seed(config);

  const ProtocolParams protocol = config.protocol.fixed_triple();
  const std::string axis = config.sweep ? config.sweep->axis : "none";
  int rows = 0;
  for (double value : sweep_points(config)) {
    const ScenarioParams scenario = point_scenario(config, value);
    const SimulationReport report = simulate(scenario, protocol, options);

    auto prefix = [&](const std::string& kind, int run_index) {
      csv.cell(axis);
      if (config.sweep)
        csv.cell(value);
      else
        csv.empty();
      csv.cell(kind);
      if (run_index >= 0)
        csv.cell(run_index);
      else
        csv.empty();
      scenario_cells(csv, scenario);
      protocol_cells(csv, protocol);
      csv.cell(report.horizon);
      csv.cell(report.warmup);
      csv.cell(report.runs);
      csv.cell_u64(report.seed);
    };

    prefix("aggregate", -1);
    csv.cell(report.mean_volume);
    csv.cell(report.mean_relevance);
    csv.cell(report.volume_ci_halfwidth);
    csv.cell(report.relevance_ci_halfwidth);
    csv.cell(report.mean_adds);
    csv.cell(report.mean_deletes);
    csv.endrow();
    ++rows;
    for (int run = 0; run < report.runs; ++run) {
      prefix("run", run);
      csv.cell(report.per_run[run].mean_volume);
      csv.cell(report.per_run[run].mean_relevance);
      csv.empty();
      csv.empty();
      csv.cell(report.per_run[run].mean_adds);
      csv.cell(report.per_run[run].mean_deletes);
      csv.endrow();
      ++rows;
    }
  }
  return rows;
}

namespace {

std::vector<double> default_loads() {
  return {0.1, 0.25, 0.5, 0.75, 1.0, 1.25};
}

int figure_compare(const ExperimentConfig& config, std::ostream& out) {
  Csv csv{out, config.output.precision};
  out << "strategy," << kScenarioHeader
      << ",feasible,full_dump_period,full_dump_retries,diff_retries,volume,"
         "relevance,simulations,n_max\n";

  std::vector<double> loads =
      config.sweep && config.sweep->axis == "load" ? config.sweep->values
                                                   : default_loads();
  SimSearchOptions options;
  options.retry_limit = config.protocol.retry_limit;
  options.period_limit = config.protocol.period_limit;
  options.horizon = config.run.horizon;
  options.warmup = config.run.warmup;
  options.runs = config.run.runs;
  options.seed = require_seed(config);

  const std::vector<CompareCell> cells = compare_strategies(
      config.scenario, loads, {config.scenario.expiry_rate}, options);

  for (const CompareCell& cell : cells) {
    csv.cell(to_string(cell.strategy));
    ScenarioParams scenario = config.scenario;
    scenario.expiry_rate = cell.expiry_rate;
    scenario = scenario.with_load(cell.load);
    scenario_cells(csv, scenario);
    csv.cell(cell.result.feasible ? 1 : 0);
    if (cell.result.feasible) {
      csv.cell(cell.result.best.full_dump_period);
      csv.cell(cell.result.best.full_dump_retries);
      csv.cell(cell.result.best.diff_retries);
      csv.cell(cell.result.volume);
      csv.cell(cell.result.relevance);
    } else {
      for (int i = 0; i < 5; ++i) csv.empty();
    }
    csv.cell(cell.result.simulations);
    csv.cell(cell.result.n_max);
    csv.endrow();
  }
  return static_cast<int>(cells.size());
}

int figure_validate(const ExperimentConfig& config, std::ostream& out) {
  Csv csv{out, config.output.precision};
  out << "source," << kScenarioHeader
      << ",feasible,full_dump_period,full_dump_retries,diff_retries,volume,"
         "relevance\n";

  std::vector<double> loads =
      config.sweep && config.sweep->axis == "load" ? config.sweep->values
                                                   : default_loads();
  SimOptions sim;
  sim.horizon = config.run.horizon;
  sim.warmup = config.run.warmup;
  sim.runs = config.run.runs;
  sim.seed = require_seed(config);

  int rows = 0;
  for (double load : loads) {
    const ScenarioParams scenario = config.scenario.with_load(load);

    TuneOptions exact_opts = tune_options(config);
    exact_opts.mode = TuneMode::Exact;
    const TuningResult exact = tune(scenario, exact_opts);
    TuneOptions asym_opts = exact_opts;
    asym_opts.mode = TuneMode::Asymptotic;
    const TuningResult asym = tune(scenario, asym_opts);

    auto row = [&](const char* source, bool feasible, const ProtocolParams* p,
                   double volume, double relevance) {
      csv.cell(std::string(source));
      scenario_cells(csv, scenario);
      csv.cell(feasible ? 1 : 0);
      if (feasible && p) {
        csv.cell(p->full_dump_period);
        csv.cell(p->full_dump_retries);
        csv.cell(p->diff_retries);
        csv.cell(volume);
        csv.cell(relevance);
      } else {
        for (int i = 0; i < 5; ++i) csv.empty();
      }
      csv.endrow();
      ++rows;
    };

    row("analytic", exact.feasible, exact.feasible ? &*exact.best : nullptr,
        exact.feasible ? *exact.best_volume : 0.0,
        exact.feasible ? *exact.best_relevance : 0.0);
    row("asymptotic", asym.feasible, asym.feasible ? &*asym.best : nullptr,
        asym.feasible ? *asym.best_volume : 0.0,
        asym.feasible ? *asym.best_relevance : 0.0);
    if (exact.feasible) {
      const SimulationReport rep = simulate(scenario, *exact.best, sim);
      row("simulation", true, &*exact.best, rep.mean_volume, rep.mean_relevance);
    } else {
      row("simulation", false, nullptr, 0.0, 0.0);
    }
  }
  return rows;
}

int figure_sensitivity(const ExperimentConfig& config, std::ostream& out) {
  Csv csv{out, config.output.precision};
  out << "full_dump_loss_level," << kScenarioHeader
      << ",feasible,full_dump_period,full_dump_retries,diff_retries,volume,"
         "volume_full_dump,volume_ratio,relevance\n";

  // Default grids follow the shape of the sensitivity study: log-spaced
  // churn, small/large neighborhoods, a clean and a noisy link level.
  std::vector<double> gammas =
      config.sweep && config.sweep->axis == "gamma"
          ? config.sweep->values
          : std::vector<double>{1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
  const std::vector<int> neighbor_counts{10, 20, 50};
  const std::vector<double> loss_levels{0.01, 0.10};

  TuneOptions opts = tune_options(config);
  opts.mode = TuneMode::Asymptotic;
  int rows = 0;
  for (double level : loss_levels) {
    const double ber = ber_for_full_dump_loss(level, config.scenario.capacity,
                                              config.scenario.element_bits);
    for (int m : neighbor_counts) {
      for (double gamma : gammas) {
        ScenarioParams scenario = config.scenario;
        scenario.churn_rate = gamma;
        scenario.neighbor_ber.assign(static_cast<std::size_t>(m), ber);

        const TuningResult tuned = tune(scenario, opts);
        TuneOptions dump_opts = opts;
        dump_opts.period_cap = 1;
        const TuningResult dump = tune(scenario, dump_opts);

        csv.cell(level);
        scenario_cells(csv, scenario);
        const bool ok = tuned.feasible && dump.feasible;
        csv.cell(ok ? 1 : 0);
        if (ok) {
          csv.cell(tuned.best->full_dump_period);
          csv.cell(tuned.best->full_dump_retries);
          csv.cell(tuned.best->diff_retries);
          csv.cell(*tuned.best_volume);
          csv.cell(*dump.best_volume);
          csv.cell(*tuned.best_volume / *dump.best_volume);
          csv.cell(*tuned.best_relevance);
        } else {
          for (int i = 0; i < 7; ++i) csv.empty();
        }
        csv.endrow();
        ++rows;
      }
    }
  }
  return rows;
}

}  // namespace

int cmd_figures(const std::string& figure, const ExperimentConfig& config,
                std::ostream& out) {
  if (figure == "compare") return figure_compare(config, out);
  if (figure == "validate") return figure_validate(config, out);
  if (figure == "sensitivity") return figure_sensitivity(config, out);
  throw ConfigError("figures: unknown figure '" + figure +
                    "' (expected compare|validate|sensitivity)");
}

int cmd_slot_trace(const ExperimentConfig& config, std::ostream& out) {
  const ProtocolParams protocol = config.protocol.fixed_triple();
  const std::uint64_t seed = require_seed(config);
  const std::vector<SlotRecord> trace =
      simulate_trace(config.scenario, protocol, config.run.horizon, seed);
  out << "slot,kind,size,copies,delivered,all_relevant,store_size\n";
  for (const SlotRecord& rec : trace) {
    out << rec.slot << ','
        << (rec.kind == MessageKind::FullDump ? "full_dump" : "differential")
        << ',' << rec.size << ',' << rec.copies << ',';
    for (std::size_t i = 0; i < rec.delivered.size(); ++i) {
      if (i) out << ';';
      out << static_cast<int>(rec.delivered[i]);
    }
    out << ',' << (rec.all_relevant ? 1 : 0) << ',' << rec.store_size << '\n';
  }
  return static_cast<int>(trace.size());
}

}  // namespace ctrldiss
