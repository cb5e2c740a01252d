#include "kanhsi/nn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kanhsi/errors.hpp"

namespace kanhsi::nn {

Matrix softmax(const Matrix& logits) {
    require_finite(logits, "softmax");
    Matrix out(logits.rows(), logits.cols());
    for (std::size_t r = 0; r < logits.rows(); ++r) {
        const auto in = logits.row(r);
        auto dst = out.row(r);
        const double mx = *std::max_element(in.begin(), in.end());
        double sum = 0.0;
        for (std::size_t c = 0; c < in.size(); ++c) {
            dst[c] = std::exp(in[c] - mx);
            sum += dst[c];
        }
        for (auto& v : dst) {
            v /= sum;
        }
    }
    return out;
}

LossResult softmax_cross_entropy(const Matrix& logits, std::span<const std::size_t> labels) {
    if (labels.size() != logits.rows()) {
        throw InputError("softmax_cross_entropy: " + std::to_string(labels.size()) +
                         " labels for " + std::to_string(logits.rows()) + " rows");
    }
    if (logits.rows() == 0 || logits.cols() == 0) {
        throw InputError("softmax_cross_entropy: empty logits");
    }
    for (std::size_t r = 0; r < labels.size(); ++r) {
        if (labels[r] >= logits.cols()) {
            throw InputError("softmax_cross_entropy: label " + std::to_string(labels[r]) +
                             " out of range for " + std::to_string(logits.cols()) + " classes");
        }
    }
    require_finite(logits, "softmax_cross_entropy");

    const auto n = static_cast<double>(logits.rows());
    LossResult result{0.0, Matrix(logits.rows(), logits.cols())};
    for (std::size_t r = 0; r < logits.rows(); ++r) {
        const auto in = logits.row(r);
        auto g = result.grad.row(r);
        const double mx = *std::max_element(in.begin(), in.end());
        double sum = 0.0;
        for (std::size_t c = 0; c < in.size(); ++c) {
            g[c] = std::exp(in[c] - mx);
            sum += g[c];
        }
        // -log softmax[label] = log(sum) - (z_label - max)
        result.loss += std::log(sum) - (in[labels[r]] - mx);
        for (std::size_t c = 0; c < g.size(); ++c) {
            g[c] = (g[c] / sum - (c == labels[r] ? 1.0 : 0.0)) / n;
        }
    }
    result.loss /= n;
    return result;
}

}  // namespace kanhsi::nn
