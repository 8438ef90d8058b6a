#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gmrdr/erasure_predictor.hpp"
#include "gmrdr/rd_analytics.hpp"
#include "gmrdr/source_model.hpp"

namespace gmrdr {

// Empirical per-frame MSE aggregated over trials * n samples, gated against
// analytic targets. For a Gaussian error of variance v the per-sample
// squared error has variance 2 v^2, so the pooled standard error is
// v * sqrt(2 / (n * trials)) and z-scores are unit-normal under a correct
// implementation.
struct TrialStats {
  std::vector<double> per_frame_mse;
  std::vector<double> per_frame_target;
  std::vector<double> standard_errors;
  std::vector<double> z_scores;
  int trials = 0;
  int n = 0;
  std::uint64_t seed = 0;
  double z_gate = 0.0;
  bool passed = false;
};

struct ErasureTrialStats {
  TrialStats stats;
  // Prediction depth per frame, averaged over trials (exact integers for
  // deterministic patterns).
  std::vector<double> mean_k_per_frame;
};

// Samples a GOP and runs the DPCM chain per trial; targets are the
// effective distortions. Trial i draws substreams derived from (seed, i),
// so results do not depend on execution order; aggregation follows trial
// index. Deterministic for fixed inputs.
TrialStats run_distortion_experiment(const SourceParams& params,
                                     const DistortionTuple& d, int trials,
                                     std::uint64_t seed, double z_gate);

// Same chain followed by the k-step predictor under an erasure pattern;
// targets are sigma2_W[t,k] per frame.
ErasureTrialStats run_erasure_experiment(const SourceParams& params,
                                         const DistortionTuple& d,
                                         const ErasurePattern& pattern,
                                         int trials, std::uint64_t seed,
                                         double z_gate);

// Generalization with a per-trial pattern (used for i.i.d. erasures);
// targets and prediction depths are averaged over trials.
ErasureTrialStats run_erasure_experiment(
    const SourceParams& params, const DistortionTuple& d,
    const std::function<ErasurePattern(int)>& pattern_for_trial, int trials,
    std::uint64_t seed, double z_gate);

}  // namespace gmrdr
