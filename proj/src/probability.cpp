#include "ctrldiss/probability.hpp"

#include <cmath>
#include <stdexcept>

namespace ctrldiss {

double message_loss_prob(double ber, long long elements, long long element_bits) {
  if (!(ber >= 0.0 && ber < 1.0))
    throw std::domain_error("message_loss_prob: ber must be in [0, 1)");
  if (elements < 0)
    throw std::domain_error("message_loss_prob: element count must be >= 0");
  if (element_bits < 1)
    throw std::domain_error("message_loss_prob: element size must be >= 1 bit");
  if (elements == 0 || ber == 0.0) return 0.0;
  const double bits = static_cast<double>(elements) * static_cast<double>(element_bits);
  return -std::expm1(bits * std::log1p(-ber));
}

double deletion_dist(int deleted, int present, double expiry_rate) {
  if (deleted < 0 || deleted > present)
    throw std::domain_error("deletion_dist: need 0 <= deleted <= present");
  if (!(expiry_rate >= 0.0))
    throw std::domain_error("deletion_dist: expiry rate must be >= 0");
  if (expiry_rate == 0.0) return deleted == 0 ? 1.0 : 0.0;
  // log(1 - p~) = -expiry_rate exactly; p~ = 1 - exp(-expiry_rate).
  if (deleted == 0) return std::exp(-expiry_rate * present);
  const double log_death = std::log(-std::expm1(-expiry_rate));
  const double log_choose = std::lgamma(present + 1.0) - std::lgamma(deleted + 1.0) -
                            std::lgamma(present - deleted + 1.0);
  return std::exp(log_choose + deleted * log_death -
                  expiry_rate * (present - deleted));
}

double poisson_pmf(int n, double mean) {
  if (n < 0) throw std::domain_error("poisson_pmf: n must be >= 0");
  if (!(mean >= 0.0)) throw std::domain_error("poisson_pmf: mean must be >= 0");
  if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
  if (n == 0) return std::exp(-mean);
  return std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0));
}

double poisson_upper_tail(int n, double mean) {
  if (n <= 0) return 1.0;
  if (mean == 0.0) return 0.0;
  if (n <= mean) {
    // The complement is at most ~1/2 here, so 1 - lower loses no precision,
    // and it avoids the boundary pmf underflowing for means beyond ~745.
    double lower = 0.0;
    for (int k = 0; k < n; ++k) lower += poisson_pmf(k, mean);
    return 1.0 - lower;
  }
  // Above the mean the terms decrease; sum upward from the boundary so the
  // result stays non-negative under roundoff.
  double term = poisson_pmf(n, mean);
  double total = term;
  for (int k = n; term > 0.0; ++k) {
    term *= mean / (k + 1);
    total += term;
    if (term < total * 1e-18) break;
  }
  return total;
}

double addition_dist(int added, int present, int deleted, double arrival_rate,
                     int capacity) {
  if (deleted < 0 || deleted > present || present > capacity)
    throw std::domain_error("addition_dist: need 0 <= deleted <= present <= capacity");
  if (!(arrival_rate >= 0.0))
    throw std::domain_error("addition_dist: arrival rate must be >= 0");
  const int bound = capacity + deleted - present;
  if (added < 0 || added > bound)
    throw std::domain_error("addition_dist: count exceeds remaining capacity");
  if (bound == 0) return 1.0;
  if (added < bound) return poisson_pmf(added, arrival_rate);
  return poisson_upper_tail(bound, arrival_rate);
}

namespace detail {

PoissonTable::PoissonTable(double mean, int max_n) {
  pmf.resize(max_n + 1);
  for (int n = 0; n <= max_n; ++n) pmf[n] = poisson_pmf(n, mean);
  tail.resize(max_n + 2);
  tail[max_n + 1] = poisson_upper_tail(max_n + 1, mean);
  for (int n = max_n; n >= 0; --n) tail[n] = tail[n + 1] + pmf[n];
}

std::vector<double> deletion_row(int present, double expiry_rate) {
  std::vector<double> row(present + 1);
  for (int d = 0; d <= present; ++d) row[d] = deletion_dist(d, present, expiry_rate);
  return row;
}

}  // namespace detail

}  // namespace ctrldiss
