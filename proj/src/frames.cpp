#include "affect/frames.hpp"

#include <cstring>

#include "affect/errors.hpp"

namespace affect {

Tensor sample_frames(const Tensor& seq, std::size_t target_rows) {
    std::size_t n = seq.rows();
    if (n == 0 || seq.size() == 0) throw ConfigError("cannot sample frames from an empty sequence");
    if (target_rows == 0) throw ConfigError("target frame count must be positive");

    std::size_t d = seq.cols();
    Tensor out(std::vector<std::size_t>{target_rows, d});
    for (std::size_t k = 0; k < target_rows; ++k) {
        std::size_t src = n >= target_rows ? (k * n) / target_rows : (k < n ? k : n - 1);
        std::memcpy(out.row_ptr(k), seq.row_ptr(src), d * sizeof(double));
    }
    return out;
}

Tensor audio_frame_prep(const Tensor& frames, std::size_t target_rows) {
    return sample_frames(frames, target_rows);
}

}  // namespace affect
