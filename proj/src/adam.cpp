#include "affect/adam.hpp"

#include <cmath>

#include "affect/errors.hpp"

namespace affect {

OptimizerState make_optimizer(const ParamSet& params, double learning_rate) {
    OptimizerState state;
    state.first_moment = zeros_like(params);
    state.second_moment = zeros_like(params);
    state.learning_rate = learning_rate;
    return state;
}

void adam_step(ParamSet& params, const ParamSet& grads, OptimizerState& state) {
    state.step += 1;
    double corr1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    double corr2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));

    for (auto& [name, theta] : params.entries()) {
        if (!grads.has(name))
            throw ConfigError("gradient missing for parameter " + name);
        const Tensor& g = grads.at(name);
        if (!g.same_shape(theta))
            throw ConfigError("gradient shape mismatch for parameter " + name + ": " +
                              shape_to_string(g) + " vs " + shape_to_string(theta));
        Tensor& m = state.first_moment.at(name);
        Tensor& v = state.second_moment.at(name);
        for (std::size_t i = 0; i < theta.size(); ++i) {
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
            double m_hat = m[i] / corr1;
            double v_hat = v[i] / corr2;
            theta[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
        }
    }
}

}  // namespace affect
