#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "kanhsi/nn/layer.hpp"
#include "kanhsi/nn/matrix.hpp"

namespace kanhsi::app {

struct GradcheckInstance {
    std::unique_ptr<nn::Layer> layer;
    nn::Matrix input;
    double eps = 1e-5;
};

struct GradcheckFamily {
    std::string name;
    std::function<GradcheckInstance(std::uint64_t seed)> make;
};

/// wavkan x {mexican_hat, morlet, dog}, splinekan, dense x {identity, relu, silu},
/// each with random parameters drawn from the seed. Spline inputs stay
/// strictly inside the grid.
std::vector<GradcheckFamily> default_gradcheck_families();

struct FamilyResult {
    std::string name;
    double max_error = 0.0;
    std::size_t instances = 0;
    bool passed = false;
};

struct GradcheckSummary {
    std::vector<FamilyResult> families;
    double threshold = 1e-4;
    bool passed() const;
};

GradcheckSummary run_gradcheck(const std::vector<GradcheckFamily>& families, std::uint64_t n_seeds = 10,
                               double threshold = 1e-4);

}  // namespace kanhsi::app
