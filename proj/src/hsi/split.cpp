#include "kanhsi/hsi/split.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kanhsi/errors.hpp"
#include "kanhsi/nn/rng.hpp"

namespace kanhsi::hsi {

BandStats compute_band_stats(const HsiCube& cube, std::span<const std::size_t> pixels) {
    if (pixels.empty()) {
        throw InputError("compute_band_stats: no pixels");
    }
    const std::size_t nb = cube.bands;
    BandStats stats{std::vector<double>(nb, 0.0), std::vector<double>(nb, 0.0)};
    for (std::size_t p : pixels) {
        if (p >= cube.pixel_count()) {
            throw InputError("compute_band_stats: pixel index out of range");
        }
        const auto px = cube.pixel(p);
        for (std::size_t b = 0; b < nb; ++b) stats.mean[b] += px[b];
    }
    const auto n = static_cast<double>(pixels.size());
    for (double& m : stats.mean) m /= n;
    for (std::size_t p : pixels) {
        const auto px = cube.pixel(p);
        for (std::size_t b = 0; b < nb; ++b) {
            const double d = px[b] - stats.mean[b];
            stats.std[b] += d * d;
        }
    }
    for (double& s : stats.std) s = std::max(std::sqrt(s / n), BandStats::kMinStd);
    return stats;
}

void standardize(nn::Matrix& spectra, const BandStats& stats) {
    if (spectra.cols() != stats.mean.size() || stats.std.size() != stats.mean.size()) {
        throw InputError("standardize: " + std::to_string(spectra.cols()) + " bands but stats for " +
                         std::to_string(stats.mean.size()));
    }
    for (std::size_t r = 0; r < spectra.rows(); ++r) {
        auto row = spectra.row(r);
        for (std::size_t b = 0; b < row.size(); ++b) {
            row[b] = (row[b] - stats.mean[b]) / stats.std[b];
        }
    }
}

StandardizedCube::StandardizedCube(const HsiCube& cube, const BandStats& stats)
    : cube_(cube), stats_(stats) {
    if (stats.mean.size() != cube.bands || stats.std.size() != cube.bands) {
        throw InputError("StandardizedCube: cube has " + std::to_string(cube.bands) +
                         " bands but stats for " + std::to_string(stats.mean.size()));
    }
}

void StandardizedCube::pixel(std::size_t linear_index, std::span<double> out) const {
    if (linear_index >= cube_.pixel_count()) {
        throw InputError("StandardizedCube: pixel index out of range");
    }
    const auto px = cube_.pixel(linear_index);
    for (std::size_t b = 0; b < px.size(); ++b) {
        out[b] = (px[b] - stats_.mean[b]) / stats_.std[b];
    }
}

nn::Matrix StandardizedCube::rows(std::span<const std::size_t> pixels) const {
    nn::Matrix out(pixels.size(), cube_.bands);
    for (std::size_t r = 0; r < pixels.size(); ++r) {
        pixel(pixels[r], out.row(r));
    }
    return out;
}

std::size_t train_count(std::size_t n, double fraction) {
    if (n == 0) return 0;
    const auto rounded = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    std::size_t k = std::max<std::size_t>(1, rounded);
    if (n >= 2) k = std::min(k, n - 1);
    return k;
}

SplitIndices stratified_split(const GroundTruth& gt, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw InputError("stratified_split: fraction must lie in (0, 1)");
    }
    const std::size_t n_classes = gt.n_classes();
    std::vector<std::vector<std::size_t>> by_class(n_classes + 1);
    for (std::size_t i = 0; i < gt.labels.size(); ++i) {
        const auto l = gt.labels[i];
        if (l == 0) continue;
        if (l > n_classes) {
            throw InputError("stratified_split: label exceeds class count");
        }
        by_class[l].push_back(i);
    }

    SplitIndices split;
    split.seed = seed;
    split.fraction = fraction;
    nn::Rng rng(seed);
    for (std::size_t c = 1; c <= n_classes; ++c) {
        auto& members = by_class[c];
        if (members.empty()) {
            split.empty_classes.push_back(static_cast<std::uint16_t>(c));
            continue;
        }
        if (members.size() == 1) {
            split.singleton_classes.push_back(static_cast<std::uint16_t>(c));
        }
        rng.shuffle(std::span(members));
        const std::size_t k = train_count(members.size(), fraction);
        split.train.insert(split.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(k));
        split.test.insert(split.test.end(), members.begin() + static_cast<std::ptrdiff_t>(k), members.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

LabeledSpectra extract_spectra(const HsiCube& cube, const GroundTruth& gt,
                               std::span<const std::size_t> indices) {
    if (gt.labels.size() != cube.pixel_count()) {
        throw InputError("extract_spectra: ground truth and cube sizes differ");
    }
    LabeledSpectra out{nn::Matrix(indices.size(), cube.bands), std::vector<std::size_t>(indices.size())};
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const std::size_t p = indices[r];
        if (p >= cube.pixel_count()) {
            throw InputError("extract_spectra: pixel index " + std::to_string(p) + " out of range");
        }
        if (gt.labels[p] == 0) {
            throw InputError("extract_spectra: pixel " + std::to_string(p) + " is unlabeled");
        }
        const auto px = cube.pixel(p);
        std::copy(px.begin(), px.end(), out.x.row(r).begin());
        out.labels[r] = static_cast<std::size_t>(gt.labels[p]) - 1;
    }
    return out;
}

}  // namespace kanhsi::hsi
