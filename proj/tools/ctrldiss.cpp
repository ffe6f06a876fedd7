// ctrldiss: analytic model, parameter tuner and simulator for control
// information dissemination with full dump and differential updates.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "ctrldiss/config.hpp"
#include "ctrldiss/figures.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::string> strategy;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config (JSON)")
        ->required();
    cmd->add_option("--out", out_path, "output CSV path (default: config, else stdout)");
    auto add_u64 = cmd->add_option("--seed", "simulation seed (overrides config)");
    add_u64->check(CLI::NonNegativeNumber);
    add_u64->each([this](const std::string& v) { seed = std::stoull(v); });
    cmd->add_option_function<std::string>(
           "--mode", [this](const std::string& v) { mode = v; },
           "exact|asymptotic (overrides config)")
        ->check(CLI::IsMember({"exact", "asymptotic"}));
    cmd->add_option_function<std::string>(
           "--strategy", [this](const std::string& v) { strategy = v; },
           "full|incremental|cumulative (overrides config)")
        ->check(CLI::IsMember({"full", "incremental", "cumulative"}));
  }

  // Flags win over config fields.
  ctrldiss::ExperimentConfig load() const {
    ctrldiss::ExperimentConfig config =
        ctrldiss::ExperimentConfig::load_file(config_path);
    if (seed) config.run.seed = *seed;
    if (mode) config.protocol.mode = ctrldiss::tune_mode_from_string(*mode);
    if (strategy)
      config.protocol.strategy = ctrldiss::strategy_from_string(*strategy);
    if (!out_path.empty()) config.output.path = out_path;
    return config;
  }
};

struct OutputStream {
  std::ofstream file;
  std::ostream* stream = &std::cout;

  explicit OutputStream(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw ctrldiss::ConfigError("output: cannot open '" + path + "'");
    stream = &file;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"control information dissemination: analytic model, tuner and "
               "simulator"};
  app.require_subcommand(1);

  CommonFlags analyze_flags, tune_flags, simulate_flags, figures_flags;
  std::string trace_path;
  std::string figure_id;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "closed-form reports over a sweep (CSV)");
  analyze_flags.attach(analyze);

  CLI::App* tune_cmd = app.add_subcommand(
      "tune", "search (N, n_f, n_d) minimizing control volume");
  tune_flags.attach(tune_cmd);
  tune_cmd->add_option("--trace", trace_path,
                       "write the full search trace to this CSV");

  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "stochastic simulation (CSV)");
  simulate_flags.attach(simulate_cmd);
  std::string slot_trace_path;
  simulate_cmd->add_option(
      "--slot-trace", slot_trace_path,
      "also dump a per-slot trace of run 0 to this CSV (debug, unstable format)");

  CLI::App* figures_cmd = app.add_subcommand(
      "figures", "emit a figure data bundle: compare|validate|sensitivity");
  figures_cmd->add_option("figure", figure_id, "figure id")
      ->required()
      ->check(CLI::IsMember({"compare", "validate", "sensitivity"}));
  figures_flags.attach(figures_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      const auto config = analyze_flags.load();
      OutputStream out(config.output.path);
      ctrldiss::cmd_analyze(config, *out.stream);
      return kExitOk;
    }
    if (tune_cmd->parsed()) {
      const auto config = tune_flags.load();
      OutputStream out(config.output.path);
      std::unique_ptr<std::ofstream> trace;
      if (!trace_path.empty()) {
        trace = std::make_unique<std::ofstream>(trace_path);
        if (!*trace)
          throw ctrldiss::ConfigError("trace: cannot open '" + trace_path + "'");
      }
      bool all_feasible = true;
      ctrldiss::cmd_tune(config, *out.stream, trace.get(), &all_feasible);
      if (!all_feasible) {
        std::cerr << "tune: no (N, n_f, n_d) satisfies the relevance "
                     "threshold for at least one point\n";
        return kExitInfeasible;
      }
      return kExitOk;
    }
    if (simulate_cmd->parsed()) {
      const auto config = simulate_flags.load();
      OutputStream out(config.output.path);
      ctrldiss::cmd_simulate(config, *out.stream);
      if (!slot_trace_path.empty()) {
        std::ofstream trace(slot_trace_path);
        if (!trace)
          throw ctrldiss::ConfigError("slot-trace: cannot open '" +
                                      slot_trace_path + "'");
        ctrldiss::cmd_slot_trace(config, trace);
      }
      return kExitOk;
    }
    if (figures_cmd->parsed()) {
      const auto config = figures_flags.load();
      OutputStream out(config.output.path);
      ctrldiss::cmd_figures(figure_id, config, *out.stream);
      return kExitOk;
    }
  } catch (const ctrldiss::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ctrldiss::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
