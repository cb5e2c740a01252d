#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kanhsi/hsi/dataset.hpp"
#include "kanhsi/nn/matrix.hpp"

namespace kanhsi::hsi {

struct BandStats {
    static constexpr double kMinStd = 1e-8;

    std::vector<double> mean;
    std::vector<double> std;  // population std, floored at kMinStd

    friend bool operator==(const BandStats&, const BandStats&) = default;
};

/// Per-band mean and std over the given pixels only.
BandStats compute_band_stats(const HsiCube& cube, std::span<const std::size_t> pixels);

/// In place z-score of rows whose columns are bands.
void standardize(nn::Matrix& spectra, const BandStats& stats);

/// z-scored read access to a cube.
class StandardizedCube {
public:
    StandardizedCube(const HsiCube& cube, const BandStats& stats);

    std::size_t bands() const noexcept { return cube_.bands; }
    void pixel(std::size_t linear_index, std::span<double> out) const;
    nn::Matrix rows(std::span<const std::size_t> pixels) const;

private:
    const HsiCube& cube_;
    const BandStats& stats_;
};

struct SplitIndices {
    std::vector<std::size_t> train;  // ascending linear pixel indices
    std::vector<std::size_t> test;   // ascending
    std::uint64_t seed = 0;
    double fraction = 0.0;
    std::vector<std::uint16_t> empty_classes;      // no labeled pixels, skipped
    std::vector<std::uint16_t> singleton_classes;  // one pixel, train only

    friend bool operator==(const SplitIndices&, const SplitIndices&) = default;
};

/// Number of training pixels drawn from a class of n pixels:
/// max(1, round(fraction * n)), capped at n - 1 when n >= 2.
std::size_t train_count(std::size_t n, double fraction);

/// Per class, shuffle the labeled pixels (ascending order, then seeded
/// Fisher-Yates with one Rng shared across classes in label order) and take
/// the first train_count() for training.
SplitIndices stratified_split(const GroundTruth& gt, double fraction, std::uint64_t seed);

struct LabeledSpectra {
    nn::Matrix x;                     // N x B, raw reflectance as double
    std::vector<std::size_t> labels;  // 0-based class of each row
};

/// Row n is pixel indices[n]; labels shifted from 1..C to 0..C-1.
/// Indices must be in range and labeled.
LabeledSpectra extract_spectra(const HsiCube& cube, const GroundTruth& gt,
                               std::span<const std::size_t> indices);

}  // namespace kanhsi::hsi
