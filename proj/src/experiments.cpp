#include "gmrdr/experiments.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "gmrdr/dpcm_codec.hpp"
#include "gmrdr/rng.hpp"

namespace gmrdr {

namespace {

TrialStats finalize(std::vector<double> mse, std::vector<double> target,
                    int trials, const SourceParams& params, std::uint64_t seed,
                    double z_gate) {
  TrialStats stats;
  stats.per_frame_mse = std::move(mse);
  stats.per_frame_target = std::move(target);
  stats.trials = trials;
  stats.n = params.num_pixels;
  stats.seed = seed;
  stats.z_gate = z_gate;

  const std::size_t m = stats.per_frame_mse.size();
  const double scale =
      std::sqrt(2.0 / (static_cast<double>(params.num_pixels) * trials));
  stats.standard_errors.resize(m);
  stats.z_scores.resize(m);
  stats.passed = true;
  for (std::size_t t = 0; t < m; ++t) {
    stats.standard_errors[t] = stats.per_frame_target[t] * scale;
    stats.z_scores[t] =
        (stats.per_frame_mse[t] - stats.per_frame_target[t]) /
        stats.standard_errors[t];
    if (!(std::abs(stats.z_scores[t]) <= z_gate)) {
      stats.passed = false;
    }
  }
  return stats;
}

void check_trials(int trials) {
  if (trials < 1) {
    throw std::invalid_argument("trials must be >= 1");
  }
}

}  // namespace

TrialStats run_distortion_experiment(const SourceParams& params,
                                     const DistortionTuple& d, int trials,
                                     std::uint64_t seed, double z_gate) {
  check_trials(trials);
  DistortionTuple scheduled = d;
  innovation_schedule(params, scheduled);

  const std::size_t m = static_cast<std::size_t>(params.num_frames);
  std::vector<double> mse(m, 0.0);
  for (int i = 0; i < trials; ++i) {
    const std::uint64_t idx = static_cast<std::uint64_t>(i);
    const FrameMatrix x =
        sample_gop(params, derive_seed(seed, Stream::trial_source, idx));
    const CodecTrace trace = encode_decode_gop(
        x, params, d, derive_seed(seed, Stream::trial_codec, idx));
    const std::vector<double> dist =
        empirical_distortion(x, trace.reconstructions);
    for (std::size_t t = 0; t < m; ++t) {
      mse[t] += dist[t];
    }
  }
  for (std::size_t t = 0; t < m; ++t) {
    mse[t] /= trials;
  }
  return finalize(std::move(mse), scheduled.effective, trials, params, seed,
                  z_gate);
}

ErasureTrialStats run_erasure_experiment(const SourceParams& params,
                                         const DistortionTuple& d,
                                         const ErasurePattern& pattern,
                                         int trials, std::uint64_t seed,
                                         double z_gate) {
  return run_erasure_experiment(
      params, d, [&pattern](int) { return pattern; }, trials, seed, z_gate);
}

ErasureTrialStats run_erasure_experiment(
    const SourceParams& params, const DistortionTuple& d,
    const std::function<ErasurePattern(int)>& pattern_for_trial, int trials,
    std::uint64_t seed, double z_gate) {
  check_trials(trials);

  const std::size_t m = static_cast<std::size_t>(params.num_frames);
  std::vector<double> mse(m, 0.0);
  std::vector<double> target(m, 0.0);
  std::vector<double> mean_k(m, 0.0);
  for (int i = 0; i < trials; ++i) {
    const std::uint64_t idx = static_cast<std::uint64_t>(i);
    const FrameMatrix x =
        sample_gop(params, derive_seed(seed, Stream::trial_source, idx));
    const CodecTrace trace = encode_decode_gop(
        x, params, d, derive_seed(seed, Stream::trial_codec, idx));
    const ErasurePattern pattern = pattern_for_trial(i);
    const ErasedReconstruction erased =
        predict_lost_frames(trace, pattern, params, d);
    const std::vector<double> dist = empirical_distortion(x, erased.frames);
    for (std::size_t t = 0; t < m; ++t) {
      mse[t] += dist[t];
      target[t] += erased.analytic_mse[t];
      mean_k[t] += erased.k_per_frame[t];
    }
  }
  for (std::size_t t = 0; t < m; ++t) {
    mse[t] /= trials;
    target[t] /= trials;
    mean_k[t] /= trials;
  }

  ErasureTrialStats out;
  out.stats = finalize(std::move(mse), std::move(target), trials, params, seed,
                       z_gate);
  out.mean_k_per_frame = std::move(mean_k);
  return out;
}

}  // namespace gmrdr
