#include "gmrdr/erasure_predictor.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace gmrdr {

ErasurePattern ErasurePattern::all_received(int num_frames) {
  ErasurePattern p;
  p.received.assign(static_cast<std::size_t>(num_frames), true);
  return p;
}

ErasurePattern ErasurePattern::tail_loss(int num_frames, int k) {
  if (k < 0 || k > num_frames) {
    throw std::invalid_argument("tail loss count must be in [0, M]");
  }
  ErasurePattern p = all_received(num_frames);
  for (int t = num_frames - k; t < num_frames; ++t) {
    p.received[static_cast<std::size_t>(t)] = false;
  }
  return p;
}

ErasurePattern ErasurePattern::from_mask(const std::string& mask,
                                         int num_frames) {
  if (mask.size() != static_cast<std::size_t>(num_frames)) {
    throw std::invalid_argument("pattern mask length must equal M");
  }
  ErasurePattern p;
  p.received.reserve(mask.size());
  for (char c : mask) {
    if (c == '1') {
      p.received.push_back(true);
    } else if (c == '0') {
      p.received.push_back(false);
    } else {
      throw std::invalid_argument("pattern mask must contain only 0 and 1");
    }
  }
  return p;
}

int usable_prefix(const ErasurePattern& pattern) {
  int j = 0;
  while (j < static_cast<int>(pattern.received.size()) &&
         pattern.received[static_cast<std::size_t>(j)]) {
    ++j;
  }
  return j;
}

ErasedReconstruction predict_lost_frames(const CodecTrace& trace,
                                         const ErasurePattern& pattern,
                                         const SourceParams& params,
                                         const DistortionTuple& d) {
  params.validate();
  if (pattern.received.size() != static_cast<std::size_t>(params.num_frames)) {
    throw std::invalid_argument("pattern length must equal M");
  }
  if (trace.reconstructions.params.num_frames != params.num_frames ||
      trace.reconstructions.params.num_pixels != params.num_pixels) {
    throw std::invalid_argument("trace does not match params");
  }

  const int m = params.num_frames;
  const int n = params.num_pixels;
  const int jstar = usable_prefix(pattern);

  ErasedReconstruction out;
  out.frames = make_frame_matrix(params);
  out.k_per_frame.resize(static_cast<std::size_t>(m));
  out.analytic_mse.resize(static_cast<std::size_t>(m));

  for (int t = 0; t < m; ++t) {
    const std::size_t ft = static_cast<std::size_t>(t);
    auto row = out.frames.frame(t);
    if (t < jstar) {
      auto xhat = trace.reconstructions.frame(t);
      for (int i = 0; i < n; ++i) {
        row[i] = xhat[i];
      }
      out.k_per_frame[ft] = 0;
    } else {
      const int k = t - jstar + 1;
      out.k_per_frame[ft] = k;
      if (jstar == 0) {
        // Full loss: nothing to extrapolate from.
        for (int i = 0; i < n; ++i) {
          row[i] = 0.0;
        }
      } else {
        const double gain =
            std::pow(params.rho, k) *
            std::sqrt(params.variances[ft] /
                      params.variances[static_cast<std::size_t>(jstar - 1)]);
        auto base = trace.reconstructions.frame(jstar - 1);
        for (int i = 0; i < n; ++i) {
          row[i] = gain * base[i];
        }
      }
    }
    out.analytic_mse[ft] = kstep_variance(params, d, t, out.k_per_frame[ft]);
  }
  return out;
}

}  // namespace gmrdr
