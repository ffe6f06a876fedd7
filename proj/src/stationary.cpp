#include "ctrldiss/stationary.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ctrldiss/probability.hpp"

namespace ctrldiss {

namespace {

// Entries this small are denormal noise relative to any row mass we care
// about; downstream sums are cleaner with exact zeros.
constexpr double kFlushBelow = 1e-300;

void normalize_in_place(std::vector<double>& v) {
  double total = 0.0;
  for (double x : v) total += x;
  for (double& x : v) {
    x /= total;
    if (x < kFlushBelow) x = 0.0;
  }
}

}  // namespace

double TransitionKernel::row_sum(int row) const {
  double total = 0.0;
  for (int col = 0; col < size; ++col) total += at(row, col);
  return total;
}

double StationaryDistribution::mean() const {
  double total = 0.0;
  for (int r = 0; r < states(); ++r) total += r * pi[r];
  return total;
}

TransitionKernel build_kernel(const ScenarioParams& scenario) {
  scenario.validate();
  const int capacity = scenario.capacity;
  const double arrivals = scenario.arrival_rate;

  TransitionKernel kernel;
  kernel.size = capacity + 1;
  kernel.entries.assign(static_cast<std::size_t>(kernel.size) * kernel.size, 0.0);

  const detail::PoissonTable pois(arrivals, capacity);

  for (int r = 0; r <= capacity; ++r) {
    const std::vector<double> del = detail::deletion_row(r, scenario.expiry_rate);
    for (int d = 0; d <= r; ++d) {
      const double p_del = del[d];
      if (p_del == 0.0) continue;
      const int survivors = r - d;
      const int bound = capacity - survivors;  // arrivals admitted at most this
      if (bound == 0) {
        kernel.at(r, survivors) += p_del;
        continue;
      }
      // Interior Poisson masses land on survivors+n; the truncated tail mass
      // piles up at full capacity. Stop early once the remaining mass is
      // negligible for the 1e-10 row-sum contract.
      int n = 0;
      for (; n < bound; ++n) {
        kernel.at(r, survivors + n) += p_del * pois.pmf[n];
        if (pois.tail[n + 1] < 1e-16) {
          ++n;
          break;
        }
      }
      if (n >= bound) kernel.at(r, capacity) += p_del * pois.tail[bound];
    }
  }
  return kernel;
}

StationaryDistribution solve_stationary(const TransitionKernel& kernel) {
  if (kernel.size <= 2001) return solve_direct(kernel);
  return solve_power(kernel);
}

StationaryDistribution solve_direct(const TransitionKernel& kernel) {
  const int n = kernel.size;
  Eigen::MatrixXd a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(c, r) = kernel.at(r, c);
  a.diagonal().array() -= 1.0;
  a.row(0).setOnes();

  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(0) = 1.0;
  const Eigen::VectorXd x = a.partialPivLu().solve(b);

  StationaryDistribution out;
  out.pi.resize(n);
  for (int r = 0; r < n; ++r) {
    double v = x(r);
    if (v < 0.0) {
      if (v < -1e-9)
        throw std::runtime_error(
            "solve_direct: solution has a significantly negative entry " +
            std::to_string(v));
      v = 0.0;  // roundoff in states with vanishing mass
    }
    out.pi[r] = v;
  }
  normalize_in_place(out.pi);
  return out;
}

StationaryDistribution solve_power(const TransitionKernel& kernel,
                                   double residual_target, long max_iterations) {
  const int n = kernel.size;
  std::vector<double> cur(n, 1.0 / n);
  std::vector<double> next(n);

  double residual = 0.0;
  for (long iter = 0; iter < max_iterations; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int r = 0; r < n; ++r) {
      const double mass = cur[r];
      if (mass == 0.0) continue;
      const double* row = &kernel.entries[static_cast<std::size_t>(r) * n];
      for (int c = 0; c < n; ++c) next[c] += mass * row[c];
    }
    normalize_in_place(next);
    residual = 0.0;
    for (int r = 0; r < n; ++r) residual = std::max(residual, std::abs(next[r] - cur[r]));
    cur.swap(next);
    if (residual <= residual_target) {
      StationaryDistribution out;
      out.pi = std::move(cur);
      normalize_in_place(out.pi);
      return out;
    }
  }
  std::ostringstream msg;
  msg << "solve_power: no convergence after " << max_iterations
      << " iterations, residual " << residual;
  throw std::runtime_error(msg.str());
}

double stationary_residual(const TransitionKernel& kernel,
                           const StationaryDistribution& pi) {
  const int n = kernel.size;
  std::vector<double> image(n, 0.0);
  for (int r = 0; r < n; ++r) {
    const double mass = pi.pi[r];
    if (mass == 0.0) continue;
    const double* row = &kernel.entries[static_cast<std::size_t>(r) * n];
    for (int c = 0; c < n; ++c) image[c] += mass * row[c];
  }
  double residual = 0.0;
  for (int r = 0; r < n; ++r) residual = std::max(residual, std::abs(image[r] - pi.pi[r]));
  return residual;
}

void write_pi_csv(std::ostream& out, const StationaryDistribution& pi) {
  out << "r,pi_r\n";
  char buf[40];
  for (int r = 0; r < pi.states(); ++r) {
    std::snprintf(buf, sizeof buf, "%.12g", pi.pi[r]);
    out << r << ',' << buf << '\n';
  }
}

}  // namespace ctrldiss
