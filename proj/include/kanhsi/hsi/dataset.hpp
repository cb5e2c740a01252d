#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kanhsi::hsi {

using Rgb = std::array<std::uint8_t, 3>;

/// H x W x B reflectance cube, bands innermost.
struct HsiCube {
    std::string name;
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t bands = 0;
    std::vector<float> values;

    std::size_t pixel_count() const noexcept { return height * width; }
    std::span<const float> pixel(std::size_t linear_index) const {
        return std::span(values).subspan(linear_index * bands, bands);
    }

    /// Throws InputError unless dimensions are positive, the value count
    /// matches and every value is finite.
    void validate() const;
};

/// Per-pixel labels: 0 = unlabeled, 1..C = classes.
struct GroundTruth {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::uint16_t> labels;
    std::vector<std::string> class_names;

    std::size_t n_classes() const noexcept { return class_names.size(); }
    /// Entry c counts pixels with label c (index 0 = unlabeled).
    std::vector<std::size_t> histogram() const;
    std::size_t labeled_count() const;

    void validate() const;
};

/// JSON dataset descriptor. Paths are resolved against the manifest's
/// directory. Optional fields written by the converter are cross-checked
/// on load when present.
struct DatasetManifest {
    std::filesystem::path source;  // manifest file itself
    std::string dataset;
    std::filesystem::path cube;
    std::filesystem::path gt;
    std::vector<std::string> class_names;
    std::vector<Rgb> palette;  // empty = generated default
    Rgb background{0, 0, 0};
    std::optional<std::size_t> height;
    std::optional<std::size_t> width;
    std::optional<std::size_t> bands;
    std::optional<std::vector<std::size_t>> class_counts;
};

DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

struct HsiDataset {
    DatasetManifest manifest;
    HsiCube cube;
    GroundTruth gt;
};

/// Reads the cube (any supported dtype, converted to float32) and the
/// ground truth (u1/u2), and checks them against each other and the
/// manifest. Shape and label problems raise InputError.
HsiDataset load_dataset(const std::filesystem::path& manifest_path);

HsiCube cube_from_npy(const std::filesystem::path& path, std::string name);
GroundTruth gt_from_npy(const std::filesystem::path& path, std::vector<std::string> class_names);

}  // namespace kanhsi::hsi
