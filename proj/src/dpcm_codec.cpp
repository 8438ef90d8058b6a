#include "gmrdr/dpcm_codec.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "gmrdr/rng.hpp"

namespace gmrdr {

std::vector<double> test_channel_sample(std::span<const double> w,
                                        double sigma2_w, double d_eff,
                                        std::uint64_t seed) {
  if (!(sigma2_w > 0.0) || !(d_eff > 0.0)) {
    throw std::invalid_argument("test channel requires positive variances");
  }
  if (d_eff > sigma2_w) {
    throw std::invalid_argument(
        "test channel requires d_eff <= sigma2_w; clip the target first");
  }
  std::vector<double> what(w.size(), 0.0);
  const double a = (sigma2_w - d_eff) / sigma2_w;
  if (a <= 0.0) {
    return what;  // zero-information description
  }
  const double v_sd = std::sqrt(a * d_eff);
  NormalSampler ns(seed);
  for (std::size_t i = 0; i < w.size(); ++i) {
    what[i] = a * w[i] + v_sd * ns();
  }
  return what;
}

CodecTrace encode_decode_gop(const FrameMatrix& x, const SourceParams& params,
                             const DistortionTuple& d, std::uint64_t seed) {
  params.validate();
  if (x.params.num_frames != params.num_frames ||
      x.params.num_pixels != params.num_pixels) {
    throw std::invalid_argument("source matrix does not match params");
  }

  CodecTrace trace;
  DistortionTuple scheduled = d;
  trace.residual_variances_used = innovation_schedule(params, scheduled);
  trace.report = sum_rate(params, d);
  trace.reconstructions = make_frame_matrix(params);

  const int n = params.num_pixels;
  std::vector<double> pred(static_cast<std::size_t>(n), 0.0);
  std::vector<double> residual(static_cast<std::size_t>(n));

  for (int t = 0; t < params.num_frames; ++t) {
    const std::size_t ft = static_cast<std::size_t>(t);
    if (t > 0) {
      const double gain = prediction_gain(params, t);
      auto prev = trace.reconstructions.frame(t - 1);
      for (int i = 0; i < n; ++i) {
        pred[static_cast<std::size_t>(i)] = gain * prev[i];
      }
    }
    auto src = x.frame(t);
    auto out = trace.reconstructions.frame(t);

    if (d.targets[ft] >= trace.residual_variances_used[ft]) {
      // Zero rate: the encoder sends nothing, the decoder keeps the
      // prediction.
      for (int i = 0; i < n; ++i) {
        out[i] = pred[static_cast<std::size_t>(i)];
      }
      continue;
    }

    for (int i = 0; i < n; ++i) {
      residual[static_cast<std::size_t>(i)] =
          src[i] - pred[static_cast<std::size_t>(i)];
    }
    std::vector<double> what = test_channel_sample(
        residual, trace.residual_variances_used[ft], scheduled.effective[ft],
        derive_seed(seed, Stream::test_channel, static_cast<std::uint64_t>(t)));
    for (int i = 0; i < n; ++i) {
      out[i] = pred[static_cast<std::size_t>(i)] + what[static_cast<std::size_t>(i)];
    }
  }
  return trace;
}

}  // namespace gmrdr
