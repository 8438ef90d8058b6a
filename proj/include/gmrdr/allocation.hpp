#pragma once

#include <vector>

#include "gmrdr/rd_analytics.hpp"
#include "gmrdr/source_model.hpp"

namespace gmrdr {

struct AllocationResult {
  DistortionTuple distortions;
  RateReport report;
  // Common-D policy: the common target found (for budget 0, the smallest
  // common value achieving zero rate). Weighted policy: sum_t w_t * D_t.
  double objective_value = 0.0;
  int iterations = 0;
};

// Finds the common target D with sum_rate(params, D*1) = budget_bits, by
// bisection on D in (0, max_t sigma_t^2]. The sum-rate is continuous and
// strictly decreasing in the common target wherever it is positive, so the
// residual |R - budget| of the best iterate is driven below 1e-9 bits.
// budget_bits == 0 returns the zero-rate schedule D_t = sigma_t^2.
AllocationResult allocate_common_distortion(const SourceParams& params,
                                            double budget_bits);

// Minimizes sum_t weights[t] * D_t subject to sum_rate(D) <= budget_bits.
// Solved by coordinate descent over log-distortions on the Lagrangian
// objective, with the budget enforced by bisection on the rate multiplier;
// each inner solve restarts from the common-D point. Targets are capped at
// the zero-rate schedule values, which removes the flat clipped directions
// from the search space.
AllocationResult allocate_min_weighted_distortion(
    const SourceParams& params, double budget_bits,
    const std::vector<double>& weights);

}  // namespace gmrdr
