#include "ctrldiss/params.hpp"

#include <cstdio>
#include <stdexcept>

namespace ctrldiss {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::FullDumpOnly: return "full";
    case Strategy::Incremental: return "incremental";
    case Strategy::Cumulative: return "cumulative";
  }
  return "unknown";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "full" || name == "full_dump" || name == "fulldump")
    return Strategy::FullDumpOnly;
  if (name == "incremental") return Strategy::Incremental;
  if (name == "cumulative") return Strategy::Cumulative;
  throw std::invalid_argument("unknown strategy '" + name +
                              "' (expected full|incremental|cumulative)");
}

double ScenarioParams::load() const {
  return arrival_rate / (expiry_rate * static_cast<double>(capacity));
}

ScenarioParams ScenarioParams::with_load(double load) const {
  ScenarioParams out = *this;
  out.arrival_rate = load * expiry_rate * static_cast<double>(capacity);
  return out;
}

void ScenarioParams::validate() const {
  if (!(arrival_rate >= 0.0))
    throw std::invalid_argument("scenario.arrival_rate: must be >= 0");
  if (!(expiry_rate > 0.0))
    throw std::invalid_argument("scenario.expiry_rate: must be > 0");
  if (capacity < 1)
    throw std::invalid_argument("scenario.capacity: must be >= 1");
  if (element_bits < 1)
    throw std::invalid_argument("scenario.element_bits: must be >= 1");
  if (!(churn_rate >= 0.0))
    throw std::invalid_argument("scenario.churn_rate: must be >= 0");
  if (neighbor_ber.empty())
    throw std::invalid_argument("scenario.neighbors: at least one neighbor required");
  for (std::size_t i = 0; i < neighbor_ber.size(); ++i) {
    const double ber = neighbor_ber[i];
    if (!(ber >= 0.0 && ber < 1.0))
      throw std::invalid_argument("scenario.neighbors[" + std::to_string(i) +
                                  "]: ber must be in [0, 1)");
  }
  if (!(relevance_threshold > 0.0 && relevance_threshold < 1.0))
    throw std::invalid_argument("scenario.relevance_threshold: must be in (0, 1)");
}

namespace {

std::uint64_t fnv1a(std::uint64_t h, const char* data, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a_double(std::uint64_t h, double v) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return fnv1a(h, buf, static_cast<std::size_t>(n));
}

}  // namespace

std::uint64_t ScenarioParams::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a_double(h, arrival_rate);
  h = fnv1a_double(h, expiry_rate);
  h = fnv1a_double(h, static_cast<double>(capacity));
  h = fnv1a_double(h, static_cast<double>(element_bits));
  h = fnv1a_double(h, churn_rate);
  for (double ber : neighbor_ber) h = fnv1a_double(h, ber);
  h = fnv1a_double(h, relevance_threshold);
  return h;
}

LoadPoint load_point(const ScenarioParams& scenario) {
  scenario.validate();
  return LoadPoint{scenario.load()};
}

void ProtocolParams::validate() const {
  if (full_dump_period < 1)
    throw std::invalid_argument("protocol.full_dump_period: must be >= 1");
  if (full_dump_retries < 1)
    throw std::invalid_argument("protocol.full_dump_retries: must be >= 1");
  if (diff_retries < 1)
    throw std::invalid_argument("protocol.diff_retries: must be >= 1");
  if (strategy == Strategy::FullDumpOnly && full_dump_period != 1)
    throw std::invalid_argument(
        "protocol.full_dump_period: must be 1 for the full dump strategy");
}

ProtocolParams ProtocolParams::full_dump_only(int retries) {
  return ProtocolParams{Strategy::FullDumpOnly, 1, retries, 1};
}

ProtocolParams ProtocolParams::incremental(int period, int full_retries,
                                           int diff_retries) {
  return ProtocolParams{Strategy::Incremental, period, full_retries, diff_retries};
}

ProtocolParams ProtocolParams::cumulative(int period, int full_retries,
                                          int diff_retries) {
  return ProtocolParams{Strategy::Cumulative, period, full_retries, diff_retries};
}

}  // namespace ctrldiss
