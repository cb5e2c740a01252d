#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kanhsi::metrics {

/// C x C count matrix, counts[truth][pred].
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::size_t n_classes = 0);

    std::size_t n_classes() const noexcept { return n_; }
    std::uint64_t count(std::size_t truth, std::size_t pred) const { return counts_.at(truth * n_ + pred); }
    std::uint64_t total() const noexcept { return total_; }
    std::uint64_t trace() const noexcept;
    std::uint64_t row_sum(std::size_t truth) const;
    std::uint64_t col_sum(std::size_t pred) const;

    void accumulate(std::size_t truth, std::size_t pred);
    void accumulate(std::span<const std::size_t> truth, std::span<const std::size_t> pred);

    /// Elementwise sum; class counts must agree.
    ConfusionMatrix& operator+=(const ConfusionMatrix& other);

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    std::size_t n_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

/// trace / N. Throws MetricError when N = 0.
double overall_accuracy(const ConfusionMatrix& cm);

/// Cohen's kappa (p_o - p_e) / (1 - p_e), p_e = sum_c row_c col_c / N^2.
/// The marginal products are summed in integers before the single division,
/// so the value depends only on the counts. Throws MetricError for N = 0 or
/// p_e = 1.
double kappa(const ConfusionMatrix& cm);

/// Recall per class; classes without test pixels get NaN.
std::vector<double> per_class_accuracy(const ConfusionMatrix& cm);

}  // namespace kanhsi::metrics
