#pragma once

#include "affect/tensor.hpp"

namespace affect {

// Uniform temporal resampling of an N x D frame matrix to exactly T rows.
// N >= T picks rows floor(k*N/T), k = 0..T-1 (strictly increasing, starts at
// row 0); N < T keeps all rows and pads by duplicating the last one.
Tensor sample_frames(const Tensor& seq, std::size_t target_rows = 20);

// Same rule for audio frame sequences.
Tensor audio_frame_prep(const Tensor& frames, std::size_t target_rows = 20);

}  // namespace affect
