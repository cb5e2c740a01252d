#include "kanhsi/metrics/confusion.hpp"

#include <limits>
#include <string>

#include "kanhsi/errors.hpp"

namespace kanhsi::metrics {

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

ConfusionMatrix::ConfusionMatrix(std::size_t n_classes) : n_(n_classes), counts_(n_classes * n_classes, 0) {}

std::uint64_t ConfusionMatrix::trace() const noexcept {
    std::uint64_t t = 0;
    for (std::size_t c = 0; c < n_; ++c) t += counts_[c * n_ + c];
    return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t truth) const {
    std::uint64_t s = 0;
    for (std::size_t p = 0; p < n_; ++p) s += counts_.at(truth * n_ + p);
    return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t pred) const {
    std::uint64_t s = 0;
    for (std::size_t t = 0; t < n_; ++t) s += counts_.at(t * n_ + pred);
    return s;
}

void ConfusionMatrix::accumulate(std::size_t truth, std::size_t pred) {
    if (truth >= n_ || pred >= n_) {
        throw InputError("ConfusionMatrix::accumulate: class (" + std::to_string(truth) + ", " +
                         std::to_string(pred) + ") out of range for " + std::to_string(n_) + " classes");
    }
    ++counts_[truth * n_ + pred];
    ++total_;
}

void ConfusionMatrix::accumulate(std::span<const std::size_t> truth, std::span<const std::size_t> pred) {
    if (truth.size() != pred.size()) {
        throw InputError("ConfusionMatrix::accumulate: truth and prediction lengths differ");
    }
    for (std::size_t i = 0; i < truth.size(); ++i) accumulate(truth[i], pred[i]);
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    if (other.n_ != n_) {
        throw InputError("ConfusionMatrix: cannot merge matrices of different class counts");
    }
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    total_ += other.total_;
    return *this;
}

double overall_accuracy(const ConfusionMatrix& cm) {
    if (cm.total() == 0) {
        throw MetricError("overall_accuracy: empty confusion matrix");
    }
    return static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
}

double kappa(const ConfusionMatrix& cm) {
    const std::uint64_t n = cm.total();
    if (n == 0) {
        throw MetricError("kappa: empty confusion matrix");
    }
    u128 marginal = 0;
    for (std::size_t c = 0; c < cm.n_classes(); ++c) {
        marginal += static_cast<u128>(cm.row_sum(c)) * cm.col_sum(c);
    }
    const auto n2 = static_cast<u128>(n) * n;
    if (marginal == n2) {
        throw MetricError("kappa: chance agreement is 1 (single class in truth and prediction)");
    }
    const double p_o = static_cast<double>(cm.trace()) / static_cast<double>(n);
    const double p_e = static_cast<double>(marginal) / static_cast<double>(n2);
    return (p_o - p_e) / (1.0 - p_e);
}

std::vector<double> per_class_accuracy(const ConfusionMatrix& cm) {
    std::vector<double> out(cm.n_classes(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t c = 0; c < cm.n_classes(); ++c) {
        const std::uint64_t row = cm.row_sum(c);
        if (row > 0) out[c] = static_cast<double>(cm.count(c, c)) / static_cast<double>(row);
    }
    return out;
}

}  // namespace kanhsi::metrics
