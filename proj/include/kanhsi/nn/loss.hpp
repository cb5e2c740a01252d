#pragma once

#include <cstddef>
#include <span>

#include "kanhsi/nn/matrix.hpp"

namespace kanhsi::nn {

struct LossResult {
    double loss = 0.0;  ///< mean over rows
    Matrix grad;        ///< d loss / d logits, same shape as logits
};

/// Row-wise softmax with max subtraction.
Matrix softmax(const Matrix& logits);

/// Mean softmax cross-entropy over rows and its gradient (softmax - onehot) / N.
LossResult softmax_cross_entropy(const Matrix& logits, std::span<const std::size_t> labels);

}  // namespace kanhsi::nn
