#pragma once

#include "kanhsi/nn/layer.hpp"
#include "kanhsi/nn/matrix.hpp"

namespace kanhsi::nn {

struct GradCheckReport {
    double max_param_error = 0.0;
    double max_input_error = 0.0;
    std::size_t n_checked = 0;

    double max_error() const noexcept {
        return max_param_error > max_input_error ? max_param_error : max_input_error;
    }
};

/// Relative error |a - n| / max(|a|, |n|, floor). The floor keeps vanishing
/// gradients (wavelet tails) from turning roundoff into huge ratios.
double relative_error(double analytic, double numeric, double floor = 1e-3);

/// Compares the analytic gradient of the probe loss sum(layer(x)) with
/// central differences over every parameter and every input entry.
/// The layer's parameters are restored before returning.
GradCheckReport finite_diff_check(Layer& layer, const Matrix& x, double eps);

}  // namespace kanhsi::nn
