#ifndef CTRLDISS_FIGURES_HPP
#define CTRLDISS_FIGURES_HPP

#include <iosfwd>
#include <string>

#include "ctrldiss/config.hpp"
#include "ctrldiss/tuner.hpp"

namespace ctrldiss {

/// Analytic report rows, one per sweep point (or a single row without a
/// sweep). Returns the number of data rows written.
int cmd_analyze(const ExperimentConfig& config, std::ostream& out);

/// Tuning rows, one per sweep point. `all_feasible` is cleared when any
/// point has an empty feasible set.
int cmd_tune(const ExperimentConfig& config, std::ostream& out,
             std::ostream* trace, bool* all_feasible);

/// Simulation rows: an aggregate row followed by per-run rows per point.
int cmd_simulate(const ExperimentConfig& config, std::ostream& out);

/// Figure bundles: "compare" (strategy comparison over load),
/// "validate" (analytic vs asymptotic vs simulation over load) and
/// "sensitivity" (tuning outcome over churn, neighbor count and link
/// quality). Infeasible cells keep their key columns and leave the value
/// columns empty.
int cmd_figures(const std::string& figure, const ExperimentConfig& config,
                std::ostream& out);

/// Per-slot debug trace of a single run (config scenario, fixed triple,
/// run.seed). The format is for debugging only and is not stable.
int cmd_slot_trace(const ExperimentConfig& config, std::ostream& out);

}  // namespace ctrldiss

#endif  // CTRLDISS_FIGURES_HPP
