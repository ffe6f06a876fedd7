#ifndef CTRLDISS_PROBABILITY_HPP
#define CTRLDISS_PROBABILITY_HPP

#include <vector>

namespace ctrldiss {

/// Probability that a broadcast carrying `elements` information elements of
/// `element_bits` bits each is not decoded over a link with the given bit
/// error rate: 1 - (1 - ber)^(elements * element_bits), assuming independent
/// bit errors. Zero elements always get through.
double message_loss_prob(double ber, long long elements, long long element_bits);

/// Probability of deleting exactly `deleted` out of `present` elements in one
/// slot when lifetimes are exponential with the given expiry rate. Binomial
/// with per-element death probability 1 - exp(-expiry_rate).
double deletion_dist(int deleted, int present, double expiry_rate);

/// Conditional probability of admitting exactly `added` new elements in a
/// slot that started with `present` elements and deleted `deleted` of them.
/// Poisson arrivals truncated by the remaining capacity: the boundary count
/// capacity + deleted - present absorbs the whole Poisson tail.
double addition_dist(int added, int present, int deleted, double arrival_rate,
                     int capacity);

/// Poisson probability mass, evaluated in log space.
double poisson_pmf(int n, double mean);

/// Upper tail sum_{k>=n} of the Poisson pmf, accumulated from positive terms
/// so the result never goes negative under roundoff.
double poisson_upper_tail(int n, double mean);

namespace detail {

/// Poisson masses pmf[0..max_n] plus tail[k] = P(X >= k) for k in 0..max_n+1;
/// tail[max_n+1] covers everything beyond the table. Shared by the kernel
/// builder and the differential-loss sum.
struct PoissonTable {
  std::vector<double> pmf;
  std::vector<double> tail;
  PoissonTable(double mean, int max_n);
};

/// Binomial row pmf[d] = deletion_dist(d, present, expiry_rate), d = 0..present.
std::vector<double> deletion_row(int present, double expiry_rate);

}  // namespace detail

}  // namespace ctrldiss

#endif  // CTRLDISS_PROBABILITY_HPP
