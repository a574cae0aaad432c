#pragma once

#include <array>
#include <filesystem>

#include "affect/model.hpp"

namespace affect {

// Linear regression over the three unimodal predictions (visual, audio, text).
struct LateFusionCombiner {
    std::array<double, 3> weights{0.0, 0.0, 0.0};
    double bias = 0.0;
};

// w . preds + bias, clipped to the target's label range
// ([0,1] for arousal, [-1,1] for valence).
double late_fusion_predict(const std::array<double, 3>& preds,
                           const LateFusionCombiner& combiner, Target target);

// Ordinary least squares with a bias column and a tiny ridge (1e-8) on the
// normal equations. predictions[k] is the k-th model's prediction vector.
LateFusionCombiner fit_linear_combiner(const std::array<std::vector<double>, 3>& predictions,
                                       const std::vector<double>& targets);

void save_combiner(const LateFusionCombiner& combiner, const std::filesystem::path& path);
LateFusionCombiner load_combiner(const std::filesystem::path& path);

}  // namespace affect
