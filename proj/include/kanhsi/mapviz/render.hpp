#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "kanhsi/hsi/dataset.hpp"
#include "kanhsi/hsi/split.hpp"
#include "kanhsi/kan/model.hpp"

namespace kanhsi::mapviz {

/// Class colors for labels 1..C plus the color of label 0.
struct Palette {
    std::vector<hsi::Rgb> colors;
    hsi::Rgb background{0, 0, 0};

    /// Throws InputError if two class colors coincide.
    void validate() const;
};

/// C distinct colors, deterministic. None equals black.
Palette default_palette(std::size_t n_classes);

/// The manifest palette when it has one, otherwise default_palette().
Palette palette_for(const hsi::DatasetManifest& manifest);

/// H x W map of 1-based class labels (0 = background).
struct LabelMap {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::uint16_t> labels;

    friend bool operator==(const LabelMap&, const LabelMap&) = default;
};

/// Binary PPM: "P6\n<W> <H>\n255\n" then RGB bytes in raster order.
std::vector<std::uint8_t> render_map(const LabelMap& map, const Palette& palette);
void write_map(const std::filesystem::path& path, const LabelMap& map, const Palette& palette);

LabelMap ground_truth_map(const hsi::GroundTruth& gt);

/// Classifies every pixel (labeled or not) with argmax, lowest index on
/// ties, and stores class + 1. Rows go through the model in chunks of
/// batch_size; the result does not depend on batch_size or threads.
LabelMap predict_full_scene(const kan::Model& model, const hsi::HsiCube& cube,
                            const hsi::BandStats& stats, std::size_t batch_size = 4096,
                            unsigned threads = 0);

}  // namespace kanhsi::mapviz
