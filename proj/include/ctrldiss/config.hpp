#ifndef CTRLDISS_CONFIG_HPP
#define CTRLDISS_CONFIG_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctrldiss/params.hpp"
#include "ctrldiss/tuner.hpp"

namespace ctrldiss {

/// Invalid or inconsistent configuration; messages carry the field path.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested operating point cannot satisfy the relevance threshold.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProtocolBlock {
  std::optional<Strategy> strategy;
  std::optional<int> full_dump_period;
  std::optional<int> full_dump_retries;
  std::optional<int> diff_retries;
  bool tune = false;
  TuneMode mode = TuneMode::Exact;
  int retry_limit = 7;
  int period_limit = 1000;

  bool has_fixed_triple() const {
    return full_dump_period && full_dump_retries && diff_retries;
  }
  ProtocolParams fixed_triple() const;
};

struct RunBlock {
  long long horizon = 100000;
  long long warmup = -1;  ///< negative = simulator default
  int runs = 20;
  std::optional<std::uint64_t> seed;
};

struct SweepBlock {
  std::string axis;  ///< load | gamma | ber | neighbors
  std::vector<double> values;
};

struct OutputBlock {
  std::string path;  ///< empty = stdout
  int precision = 12;
};

/// One experiment description: scenario, protocol, run budget, optional
/// sweep axis and output destination. Parsed from a JSON file; command-line
/// flags override individual fields.
struct ExperimentConfig {
  ScenarioParams scenario;
  bool scenario_by_load = false;  ///< arrival rate was given as a load value
  double load_value = 0.0;
  bool element_size_in_bytes = false;  ///< element size was given in bytes
  ProtocolBlock protocol;
  RunBlock run;
  std::optional<SweepBlock> sweep;
  OutputBlock output;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  static ExperimentConfig load_file(const std::string& path);

  /// Scenario with the sweep axis applied at the given value.
  ScenarioParams scenario_at(const std::string& axis, double value) const;
};

/// Formats a double with the given number of significant digits, the way all
/// CSV output is written.
std::string format_number(double value, int precision = 12);

/// Joins per-neighbor values with ';' so they fit one CSV field.
std::string join_values(const std::vector<double>& values, int precision = 12);

}  // namespace ctrldiss

#endif  // CTRLDISS_CONFIG_HPP
