#pragma once

#include <cstddef>
#include <span>

#include "kanhsi/nn/rng.hpp"

namespace kanhsi::nn {

/// Bound of the Glorot/Xavier uniform law: sqrt(6 / (fan_in + fan_out)).
double glorot_bound(std::size_t fan_in, std::size_t fan_out);

/// Fills `out` with draws uniform in [-bound, bound).
void fill_uniform(std::span<double> out, double bound, Rng& rng);

void fill_glorot(std::span<double> out, std::size_t fan_in, std::size_t fan_out, Rng& rng);

}  // namespace kanhsi::nn
