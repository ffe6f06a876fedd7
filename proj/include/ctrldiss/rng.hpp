#ifndef CTRLDISS_RNG_HPP
#define CTRLDISS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>

namespace ctrldiss {

// splitmix64, used only to spread seeds over the xoshiro state space.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256++ generator. Hand-rolled so that draw sequences are identical
/// on every platform; std::* distributions leave the algorithm unspecified.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_double() < p; }

  /// Exponential variate with the given rate; rate 0 maps to +infinity.
  double exponential(double rate) {
    if (rate <= 0.0) return std::numeric_limits<double>::infinity();
    return -std::log1p(-next_double()) / rate;
  }

  /// Poisson variate. Large means are split by additivity so the product
  /// method never underflows.
  long long poisson(double mean) {
    long long total = 0;
    while (mean > 30.0) {
      total += poisson_small(30.0);
      mean -= 30.0;
    }
    return total + poisson_small(mean);
  }

  /// Count of successes among n independent trials with probability p.
  long long binomial_count(long long n, double p) {
    long long hits = 0;
    for (long long i = 0; i < n; ++i) hits += bernoulli(p) ? 1 : 0;
    return hits;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  long long poisson_small(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    long long k = 0;
    double product = 1.0;
    do {
      ++k;
      product *= next_double();
    } while (product > limit);
    return k - 1;
  }

  std::uint64_t state_[4];
};

/// Derives an independent substream seed from (master, run, concern, index).
/// Separate concerns get separate generators so that perturbing one model
/// parameter leaves the other draw sequences untouched (common random
/// numbers for the monotonicity checks).
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t run,
                                    std::uint64_t concern, std::uint64_t index = 0) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  s ^= run * 0x9e3779b97f4a7c15ULL;
  h ^= splitmix64(s);
  s ^= concern * 0xd1b54a32d192ed03ULL;
  h ^= splitmix64(s);
  s ^= index * 0x8cb92ba72f3d8dd7ULL;
  h ^= splitmix64(s);
  return h;
}

namespace stream {
constexpr std::uint64_t kArrivals = 1;
constexpr std::uint64_t kDeaths = 2;
constexpr std::uint64_t kChannel = 3;
constexpr std::uint64_t kChurn = 4;
}  // namespace stream

}  // namespace ctrldiss

#endif  // CTRLDISS_RNG_HPP
