#ifndef CTRLDISS_STATIONARY_HPP
#define CTRLDISS_STATIONARY_HPP

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "ctrldiss/params.hpp"

namespace ctrldiss {

/// One-slot transition matrix of the tracked-element count, dense and
/// row-stochastic, states 0..capacity.
struct TransitionKernel {
  int size = 0;                 ///< capacity + 1
  std::vector<double> entries;  ///< row-major size*size

  double at(int row, int col) const { return entries[static_cast<std::size_t>(row) * size + col]; }
  double& at(int row, int col) { return entries[static_cast<std::size_t>(row) * size + col]; }
  double row_sum(int row) const;
};

/// Stationary law of the tracked-element count.
struct StationaryDistribution {
  std::vector<double> pi;

  int states() const { return static_cast<int>(pi.size()); }
  double mean() const;
};

/// Composes the deletion and truncated-arrival distributions into the
/// one-slot kernel: deletions first, then arrivals into the freed capacity.
TransitionKernel build_kernel(const ScenarioParams& scenario);

/// Stationary distribution via the solver suited to the kernel size:
/// a direct linear solve up to 2001 states, power iteration beyond.
StationaryDistribution solve_stationary(const TransitionKernel& kernel);

/// Direct route: solve pi (P - I) = 0 with the normalization sum pi = 1
/// replacing one equation.
StationaryDistribution solve_direct(const TransitionKernel& kernel);

/// Iterative route: repeated application of the kernel until the fixed-point
/// residual drops below `residual_target`. Throws std::runtime_error with
/// the reached residual if the iteration cap is exceeded.
StationaryDistribution solve_power(const TransitionKernel& kernel,
                                   double residual_target = 1e-10,
                                   long max_iterations = 1000000);

/// Max-norm fixed-point residual ||pi P - pi||_inf.
double stationary_residual(const TransitionKernel& kernel,
                           const StationaryDistribution& pi);

/// Debug dump, two columns: r, pi_r.
void write_pi_csv(std::ostream& out, const StationaryDistribution& pi);

}  // namespace ctrldiss

#endif  // CTRLDISS_STATIONARY_HPP
