#pragma once

#include <cstdint>

#include "affect/nn.hpp"

namespace affect {

// Bias-corrected adaptive-moment optimizer state over one ParamSet.
struct OptimizerState {
    ParamSet first_moment;
    ParamSet second_moment;
    std::uint64_t step = 0;
    double learning_rate = 1e-2;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

OptimizerState make_optimizer(const ParamSet& params, double learning_rate);

// One in-place update step; gradients must shape-match the parameters.
void adam_step(ParamSet& params, const ParamSet& grads, OptimizerState& state);

}  // namespace affect
