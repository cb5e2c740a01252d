#include "kanhsi/nn/init.hpp"

#include <cmath>

namespace kanhsi::nn {

double glorot_bound(std::size_t fan_in, std::size_t fan_out) {
    return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

void fill_uniform(std::span<double> out, double bound, Rng& rng) {
    for (auto& v : out) {
        v = rng.uniform(-bound, bound);
    }
}

void fill_glorot(std::span<double> out, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    fill_uniform(out, glorot_bound(fan_in, fan_out), rng);
}

}  // namespace kanhsi::nn
