#include "kanhsi/nn/adam.hpp"

#include <cmath>

#include "kanhsi/errors.hpp"

namespace kanhsi::nn {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state) {
    if (params.size() != grads.size() || params.size() != state.m.size() ||
        params.size() != state.v.size()) {
        throw InputError("adam_step: parameter, gradient and moment lengths differ");
    }
    const AdamConfig& c = state.config;
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double bias1 = 1.0 - std::pow(c.beta1, t);
    const double bias2 = 1.0 - std::pow(c.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * grads[i];
        state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * grads[i] * grads[i];
        const double m_hat = state.m[i] / bias1;
        const double v_hat = state.v[i] / bias2;
        params[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
    }
}

}  // namespace kanhsi::nn
