#include "gmrdr/source_model.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "gmrdr/rng.hpp"

namespace gmrdr {

SourceParams SourceParams::constant_variance(int num_frames, int num_pixels,
                                             double rho, double sigma2) {
  SourceParams p;
  p.num_frames = num_frames;
  p.num_pixels = num_pixels;
  p.rho = rho;
  p.variances.assign(static_cast<std::size_t>(num_frames > 0 ? num_frames : 0),
                     sigma2);
  p.validate();
  return p;
}

void SourceParams::validate() const {
  if (num_frames < 1) {
    throw std::invalid_argument("num_frames must be >= 1");
  }
  if (num_pixels < 1) {
    throw std::invalid_argument("num_pixels must be >= 1");
  }
  if (!(std::abs(rho) <= 1.0)) {
    throw std::invalid_argument("|rho| must be <= 1, got " +
                                std::to_string(rho));
  }
  if (variances.size() != static_cast<std::size_t>(num_frames)) {
    throw std::invalid_argument("variances length must equal num_frames");
  }
  for (double v : variances) {
    if (!(v > 0.0)) {
      throw std::invalid_argument("all variances must be > 0");
    }
  }
}

FrameMatrix make_frame_matrix(const SourceParams& params) {
  params.validate();
  FrameMatrix m;
  m.params = params;
  m.values.assign(static_cast<std::size_t>(params.num_frames) *
                      static_cast<std::size_t>(params.num_pixels),
                  0.0);
  return m;
}

FrameMatrix sample_gop(const SourceParams& params, std::uint64_t seed) {
  FrameMatrix x = make_frame_matrix(params);
  const int n = params.num_pixels;

  {
    NormalSampler ns(derive_seed(seed, Stream::gop_noise, 0));
    const double sd = std::sqrt(params.variances[0]);
    auto row = x.frame(0);
    for (int i = 0; i < n; ++i) {
      row[i] = sd * ns();
    }
  }

  for (int t = 1; t < params.num_frames; ++t) {
    const double gain = prediction_gain(params, t);
    const double innov_var =
        std::max(0.0, 1.0 - params.rho * params.rho) * params.variances[t];
    auto prev = x.frame(t - 1);
    auto row = x.frame(t);
    if (innov_var > 0.0) {
      NormalSampler ns(derive_seed(seed, Stream::gop_noise,
                                   static_cast<std::uint64_t>(t)));
      const double sd = std::sqrt(innov_var);
      for (int i = 0; i < n; ++i) {
        row[i] = gain * prev[i] + sd * ns();
      }
    } else {
      for (int i = 0; i < n; ++i) {
        row[i] = gain * prev[i];
      }
    }
  }
  return x;
}

std::vector<double> empirical_distortion(const FrameMatrix& x,
                                         const FrameMatrix& xhat) {
  if (x.params.num_frames != xhat.params.num_frames ||
      x.params.num_pixels != xhat.params.num_pixels) {
    throw std::invalid_argument("frame matrices have mismatched dimensions");
  }
  const int n = x.params.num_pixels;
  std::vector<double> d(static_cast<std::size_t>(x.params.num_frames), 0.0);
  for (int t = 0; t < x.params.num_frames; ++t) {
    auto a = x.frame(t);
    auto b = xhat.frame(t);
    double sse = 0.0;
    for (int i = 0; i < n; ++i) {
      const double e = a[i] - b[i];
      sse += e * e;
    }
    d[static_cast<std::size_t>(t)] = sse / n;
  }
  return d;
}

double model_covariance(const SourceParams& params, int t, int s) {
  params.validate();
  if (t < 0 || t >= params.num_frames || s < 0 || s >= params.num_frames) {
    throw std::invalid_argument("frame index out of range");
  }
  if (t == s) {
    return params.variances[static_cast<std::size_t>(t)];
  }
  const int lag = std::abs(t - s);
  return std::pow(params.rho, lag) *
         std::sqrt(params.variances[static_cast<std::size_t>(t)] *
                   params.variances[static_cast<std::size_t>(s)]);
}

double prediction_gain(const SourceParams& params, int t) {
  if (t < 1 || t >= params.num_frames) {
    throw std::invalid_argument("prediction gain requires 1 <= t < M");
  }
  return params.rho * std::sqrt(params.variances[static_cast<std::size_t>(t)] /
                                params.variances[static_cast<std::size_t>(t - 1)]);
}

}  // namespace gmrdr
