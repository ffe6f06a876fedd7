#include "ctrldiss/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace ctrldiss {

using nlohmann::json;

ProtocolParams ProtocolBlock::fixed_triple() const {
  if (!has_fixed_triple())
    throw ConfigError("protocol: full_dump_period, full_dump_retries and "
                      "diff_retries are all required unless tune is set");
  ProtocolParams p;
  p.strategy = strategy.value_or(Strategy::Incremental);
  p.full_dump_period = *full_dump_period;
  p.full_dump_retries = *full_dump_retries;
  p.diff_retries = *diff_retries;
  if (p.strategy == Strategy::FullDumpOnly) p.diff_retries = 1;  // unused
  p.validate();
  return p;
}

namespace {

const json* find(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  return j.get<double>();
}

long long require_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
  return j.get<long long>();
}

void parse_scenario(const json& j, ExperimentConfig& config) {
  const json* block = find(j, "scenario");
  if (!block || !block->is_object())
    throw ConfigError("scenario: block is required");

  ScenarioParams& s = config.scenario;
  const json* arrival = find(*block, "arrival_rate");
  const json* load = find(*block, "load");
  if (static_cast<bool>(arrival) == static_cast<bool>(load))
    throw ConfigError("scenario: exactly one of arrival_rate or load is required");

  if (const json* v = find(*block, "expiry_rate"))
    s.expiry_rate = require_number(*v, "scenario.expiry_rate");
  else
    throw ConfigError("scenario.expiry_rate: required");
  if (const json* v = find(*block, "capacity"))
    s.capacity = static_cast<int>(require_integer(*v, "scenario.capacity"));
  else
    throw ConfigError("scenario.capacity: required");

  const json* bits = find(*block, "element_size_bits");
  const json* bytes = find(*block, "element_size_bytes");
  if (static_cast<bool>(bits) == static_cast<bool>(bytes))
    throw ConfigError(
        "scenario: exactly one of element_size_bits or element_size_bytes is "
        "required");
  if (bits) {
    s.element_bits = require_integer(*bits, "scenario.element_size_bits");
  } else {
    s.element_bits = 8 * require_integer(*bytes, "scenario.element_size_bytes");
    config.element_size_in_bytes = true;
  }

  if (const json* v = find(*block, "churn_rate"))
    s.churn_rate = require_number(*v, "scenario.churn_rate");
  if (const json* v = find(*block, "relevance_threshold"))
    s.relevance_threshold = require_number(*v, "scenario.relevance_threshold");

  const json* neighbors = find(*block, "neighbors");
  if (!neighbors) throw ConfigError("scenario.neighbors: required");
  if (neighbors->is_array()) {
    s.neighbor_ber.clear();
    for (std::size_t i = 0; i < neighbors->size(); ++i)
      s.neighbor_ber.push_back(require_number(
          (*neighbors)[i], "scenario.neighbors[" + std::to_string(i) + "]"));
  } else if (neighbors->is_object()) {
    const json* count = find(*neighbors, "count");
    const json* ber = find(*neighbors, "ber");
    if (!count || !ber)
      throw ConfigError("scenario.neighbors: object form needs count and ber");
    const long long m = require_integer(*count, "scenario.neighbors.count");
    if (m < 1) throw ConfigError("scenario.neighbors.count: must be >= 1");
    s.neighbor_ber.assign(static_cast<std::size_t>(m),
                          require_number(*ber, "scenario.neighbors.ber"));
  } else {
    throw ConfigError("scenario.neighbors: expected array or {count, ber}");
  }

  if (load) {
    config.scenario_by_load = true;
    config.load_value = require_number(*load, "scenario.load");
    if (!(config.load_value > 0.0))
      throw ConfigError("scenario.load: must be > 0");
    s = s.with_load(config.load_value);
  } else {
    s.arrival_rate = require_number(*arrival, "scenario.arrival_rate");
  }

  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void parse_protocol(const json& j, ProtocolBlock& p) {
  const json* block = find(j, "protocol");
  if (!block) return;
  if (!block->is_object()) throw ConfigError("protocol: expected an object");
  if (const json* v = find(*block, "strategy")) {
    if (!v->is_string()) throw ConfigError("protocol.strategy: expected a string");
    try {
      p.strategy = strategy_from_string(v->get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("protocol.strategy: ") + e.what());
    }
  }
  if (const json* v = find(*block, "full_dump_period"))
    p.full_dump_period =
        static_cast<int>(require_integer(*v, "protocol.full_dump_period"));
  if (const json* v = find(*block, "full_dump_retries"))
    p.full_dump_retries =
        static_cast<int>(require_integer(*v, "protocol.full_dump_retries"));
  if (const json* v = find(*block, "diff_retries"))
    p.diff_retries = static_cast<int>(require_integer(*v, "protocol.diff_retries"));
  if (const json* v = find(*block, "tune")) {
    if (!v->is_boolean()) throw ConfigError("protocol.tune: expected a boolean");
    p.tune = v->get<bool>();
  }
  if (const json* v = find(*block, "mode")) {
    if (!v->is_string()) throw ConfigError("protocol.mode: expected a string");
    try {
      p.mode = tune_mode_from_string(v->get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("protocol.mode: ") + e.what());
    }
  }
  if (const json* v = find(*block, "retry_limit"))
    p.retry_limit = static_cast<int>(require_integer(*v, "protocol.retry_limit"));
  if (const json* v = find(*block, "period_limit"))
    p.period_limit = static_cast<int>(require_integer(*v, "protocol.period_limit"));
}

void parse_run(const json& j, RunBlock& r) {
  const json* block = find(j, "run");
  if (!block) return;
  if (!block->is_object()) throw ConfigError("run: expected an object");
  if (const json* v = find(*block, "horizon"))
    r.horizon = require_integer(*v, "run.horizon");
  if (const json* v = find(*block, "warmup"))
    r.warmup = require_integer(*v, "run.warmup");
  if (const json* v = find(*block, "runs"))
    r.runs = static_cast<int>(require_integer(*v, "run.runs"));
  if (const json* v = find(*block, "seed")) {
    const long long seed = require_integer(*v, "run.seed");
    if (seed < 0) throw ConfigError("run.seed: must be >= 0");
    r.seed = static_cast<std::uint64_t>(seed);
  }
  if (r.horizon < 1) throw ConfigError("run.horizon: must be >= 1");
  if (r.runs < 1) throw ConfigError("run.runs: must be >= 1");
}

void parse_sweep(const json& j, std::optional<SweepBlock>& sweep) {
  const json* block = find(j, "sweep");
  if (!block) return;
  if (!block->is_object()) throw ConfigError("sweep: expected an object");
  SweepBlock s;
  const json* axis = find(*block, "axis");
  if (!axis || !axis->is_string())
    throw ConfigError("sweep.axis: required string (load|gamma|ber|neighbors)");
  s.axis = axis->get<std::string>();
  if (s.axis != "load" && s.axis != "gamma" && s.axis != "ber" &&
      s.axis != "neighbors")
    throw ConfigError("sweep.axis: expected load|gamma|ber|neighbors");
  const json* values = find(*block, "values");
  if (!values || !values->is_array() || values->empty())
    throw ConfigError("sweep.values: required non-empty array");
  for (std::size_t i = 0; i < values->size(); ++i)
    s.values.push_back(
        require_number((*values)[i], "sweep.values[" + std::to_string(i) + "]"));
  for (std::size_t i = 1; i < s.values.size(); ++i)
    if (!(s.values[i] > s.values[i - 1]))
      throw ConfigError("sweep.values: must be strictly increasing");
  sweep = std::move(s);
}

void parse_output(const json& j, OutputBlock& o) {
  const json* block = find(j, "output");
  if (!block) return;
  if (!block->is_object()) throw ConfigError("output: expected an object");
  if (const json* v = find(*block, "path")) {
    if (!v->is_string()) throw ConfigError("output.path: expected a string");
    o.path = v->get<std::string>();
  }
  if (const json* v = find(*block, "precision")) {
    o.precision = static_cast<int>(require_integer(*v, "output.precision"));
    if (o.precision < 1 || o.precision > 17)
      throw ConfigError("output.precision: must be in 1..17");
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  ExperimentConfig config;
  parse_scenario(j, config);
  parse_protocol(j, config.protocol);
  parse_run(j, config.run);
  parse_sweep(j, config.sweep);
  parse_output(j, config.output);
  return config;
}

json ExperimentConfig::to_json() const {
  json j;
  json& s = j["scenario"];
  if (scenario_by_load)
    s["load"] = load_value;
  else
    s["arrival_rate"] = scenario.arrival_rate;
  s["expiry_rate"] = scenario.expiry_rate;
  s["capacity"] = scenario.capacity;
  if (element_size_in_bytes)
    s["element_size_bytes"] = scenario.element_bits / 8;
  else
    s["element_size_bits"] = scenario.element_bits;
  s["churn_rate"] = scenario.churn_rate;
  s["neighbors"] = scenario.neighbor_ber;
  s["relevance_threshold"] = scenario.relevance_threshold;

  json& p = j["protocol"];
  if (protocol.strategy) p["strategy"] = to_string(*protocol.strategy);
  if (protocol.full_dump_period) p["full_dump_period"] = *protocol.full_dump_period;
  if (protocol.full_dump_retries)
    p["full_dump_retries"] = *protocol.full_dump_retries;
  if (protocol.diff_retries) p["diff_retries"] = *protocol.diff_retries;
  p["tune"] = protocol.tune;
  p["mode"] = to_string(protocol.mode);
  p["retry_limit"] = protocol.retry_limit;
  p["period_limit"] = protocol.period_limit;

  json& r = j["run"];
  r["horizon"] = run.horizon;
  r["warmup"] = run.warmup;
  r["runs"] = run.runs;
  if (run.seed) r["seed"] = *run.seed;

  if (sweep) {
    json& w = j["sweep"];
    w["axis"] = sweep->axis;
    w["values"] = sweep->values;
  }

  json& o = j["output"];
  if (!output.path.empty()) o["path"] = output.path;
  o["precision"] = output.precision;
  return j;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  return from_json(j);
}

ScenarioParams ExperimentConfig::scenario_at(const std::string& axis,
                                             double value) const {
  ScenarioParams s = scenario;
  if (axis == "load") {
    s = s.with_load(value);
  } else if (axis == "gamma") {
    s.churn_rate = value;
  } else if (axis == "ber") {
    for (double& ber : s.neighbor_ber) ber = value;
  } else if (axis == "neighbors") {
    const double rounded = std::round(value);
    if (rounded < 1 || std::abs(rounded - value) > 1e-9)
      throw ConfigError("sweep.values: neighbor counts must be positive integers");
    const double ber = s.neighbor_ber.front();
    s.neighbor_ber.assign(static_cast<std::size_t>(rounded), ber);
  } else {
    throw ConfigError("sweep.axis: expected load|gamma|ber|neighbors");
  }
  return s;
}

std::string format_number(double value, int precision) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", precision, value);
  return buf;
}

std::string join_values(const std::vector<double>& values, int precision) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    out += format_number(values[i], precision);
  }
  return out;
}

}  // namespace ctrldiss
