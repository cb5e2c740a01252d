#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace kanhsi::nn {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    explicit AdamState(std::size_t n = 0, AdamConfig cfg = {}) : m(n, 0.0), v(n, 0.0), config(cfg) {}

    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t step = 0;
    AdamConfig config;
};

/// One bias-corrected Adam update of `params` in place.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state);

}  // namespace kanhsi::nn
