#pragma once

#include <string>
#include <vector>

#include "gmrdr/dpcm_codec.hpp"
#include "gmrdr/rd_analytics.hpp"
#include "gmrdr/source_model.hpp"

namespace gmrdr {

// Which descriptions arrived. A DPCM description is undecodable without its
// predecessor, so only the longest received prefix is usable regardless of
// what arrived after the first loss.
struct ErasurePattern {
  std::vector<bool> received;  // one flag per frame

  static ErasurePattern all_received(int num_frames);
  // Last k descriptions lost, 0 <= k <= num_frames.
  static ErasurePattern tail_loss(int num_frames, int k);
  // '1' = received, '0' = lost; length must equal num_frames.
  static ErasurePattern from_mask(const std::string& mask, int num_frames);
};

// Length of the usable prefix: the largest j with received[0..j-1] all true.
int usable_prefix(const ErasurePattern& pattern);

struct ErasedReconstruction {
  FrameMatrix frames;               // xtilde
  std::vector<int> k_per_frame;     // prediction depth per frame (0 in prefix)
  std::vector<double> analytic_mse;  // sigma2_W[t,k] targets
};

// Reconstructs every frame from the usable prefix. Frames past the prefix
// use the k-step predictor xtilde_t = rho^k (sigma_t / sigma_{t-k}) xhat_{t-k};
// when nothing was received the predictor is the zero vector.
ErasedReconstruction predict_lost_frames(const CodecTrace& trace,
                                         const ErasurePattern& pattern,
                                         const SourceParams& params,
                                         const DistortionTuple& d);

}  // namespace gmrdr
