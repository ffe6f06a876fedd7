#ifndef CTRLDISS_PARAMS_HPP
#define CTRLDISS_PARAMS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace ctrldiss {

/// Dissemination strategy for the slots between full dumps.
enum class Strategy {
  FullDumpOnly,  ///< a full dump in every slot (period forced to 1)
  Incremental,   ///< differentials carry changes since the previous message
  Cumulative,    ///< differentials carry changes since the last full dump
};

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

/// Environment description: how control state evolves at the sender and how
/// reliably its broadcasts reach each neighbor.
struct ScenarioParams {
  double arrival_rate = 0.0;        ///< mean new elements per slot
  double expiry_rate = 0.0;         ///< inverse mean element lifetime, 1/slots
  int capacity = 1;                 ///< max tracked elements
  long long element_bits = 1;       ///< size of one element, bits
  double churn_rate = 0.0;          ///< inverse mean connected-phase duration, 1/slots
  std::vector<double> neighbor_ber; ///< per-neighbor bit error rates
  double relevance_threshold = 0.95;

  int neighbor_count() const { return static_cast<int>(neighbor_ber.size()); }

  /// Dimensionless load arrival_rate / (expiry_rate * capacity).
  double load() const;

  /// Copy of this scenario with the arrival rate set from a load value.
  ScenarioParams with_load(double load) const;

  /// The model assumes element lifetimes span many slots. True when the mean
  /// lifetime drops below 10 slots and results should be taken with care.
  bool short_lifetime_warning() const { return 1.0 / expiry_rate < 10.0; }

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  /// Stable hash of all fields, used to key result rows.
  std::uint64_t hash() const;

  bool operator==(const ScenarioParams&) const = default;
};

/// A load value tied to a scenario.
struct LoadPoint {
  double load = 0.0;
};

LoadPoint load_point(const ScenarioParams& scenario);

/// The tunable triple: full dump period plus per-kind retry counts.
struct ProtocolParams {
  Strategy strategy = Strategy::Incremental;
  int full_dump_period = 1;  ///< N, slots
  int full_dump_retries = 1; ///< copies sent per full dump
  int diff_retries = 1;      ///< copies sent per differential

  /// Throws std::invalid_argument on non-positive values or a FullDumpOnly
  /// strategy with a period other than 1.
  void validate() const;

  static ProtocolParams full_dump_only(int retries);
  static ProtocolParams incremental(int period, int full_retries, int diff_retries);
  static ProtocolParams cumulative(int period, int full_retries, int diff_retries);

  bool operator==(const ProtocolParams&) const = default;
};

}  // namespace ctrldiss

#endif  // CTRLDISS_PARAMS_HPP
