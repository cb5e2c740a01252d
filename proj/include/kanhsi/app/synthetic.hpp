#pragma once

#include <cstdint>
#include <filesystem>

#include "kanhsi/hsi/dataset.hpp"

namespace kanhsi::app {

struct BlobOptions {
    std::size_t height = 30;
    std::size_t width = 30;
    std::size_t bands = 10;
    std::size_t classes = 3;
    /// Distance between any two class means, in units of the per-band noise std.
    double separation = 6.0;
    std::uint64_t seed = 0;
};

/// Gaussian blobs laid out as a small scene: horizontal bands of classes,
/// with every seventh pixel (by (row + col) % 7 == 0) left unlabeled.
/// Class c has mean (separation / sqrt 2) * e_c + 10 and unit noise.
hsi::HsiDataset make_blobs(const BlobOptions& options = {});

/// Writes cube.npy, gt.npy and manifest.json into `dir` (created if needed)
/// and returns the manifest path.
std::filesystem::path write_dataset(const hsi::HsiDataset& dataset, const std::filesystem::path& dir);

}  // namespace kanhsi::app
