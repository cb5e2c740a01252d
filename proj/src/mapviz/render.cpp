#include "kanhsi/mapviz/render.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "kanhsi/errors.hpp"
#include "kanhsi/hsi/npy.hpp"

namespace kanhsi::mapviz {

void Palette::validate() const {
    std::set<hsi::Rgb> seen;
    for (std::size_t c = 0; c < colors.size(); ++c) {
        if (!seen.insert(colors[c]).second) {
            throw InputError("palette: color of class " + std::to_string(c + 1) + " is repeated");
        }
    }
}

namespace {

// 16 well separated colors, then golden-angle hues for larger class counts.
constexpr hsi::Rgb kBase[] = {
    {230, 25, 75},  {60, 180, 75},   {255, 225, 25}, {0, 130, 200},  {245, 130, 48},  {145, 30, 180},
    {70, 240, 240}, {240, 50, 230},  {210, 245, 60}, {250, 190, 212}, {0, 128, 128},  {220, 190, 255},
    {170, 110, 40}, {255, 250, 200}, {128, 0, 0},    {170, 255, 195},
};

hsi::Rgb hue_color(std::size_t i) {
    const double h = std::fmod(static_cast<double>(i) * 137.50776405, 360.0) / 60.0;
    const double v = 0.55 + 0.4 * static_cast<double>((i / 7) % 2);
    const double x = v * (1.0 - std::abs(std::fmod(h, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(h)) {
        case 0: r = v; g = x; break;
        case 1: r = x; g = v; break;
        case 2: g = v; b = x; break;
        case 3: g = x; b = v; break;
        case 4: r = x; b = v; break;
        default: r = v; b = x; break;
    }
    return {static_cast<std::uint8_t>(std::lround(r * 255)), static_cast<std::uint8_t>(std::lround(g * 255)),
            static_cast<std::uint8_t>(std::lround(b * 255))};
}

}  // namespace

Palette default_palette(std::size_t n_classes) {
    Palette p;
    std::set<hsi::Rgb> used{p.background};
    std::size_t probe = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        hsi::Rgb color = c < std::size(kBase) ? kBase[c] : hue_color(probe++);
        while (used.count(color)) color = hue_color(probe++);
        used.insert(color);
        p.colors.push_back(color);
    }
    return p;
}

Palette palette_for(const hsi::DatasetManifest& manifest) {
    Palette p = manifest.palette.empty() ? default_palette(manifest.class_names.size())
                                         : Palette{manifest.palette, manifest.background};
    p.background = manifest.background;
    p.validate();
    return p;
}

std::vector<std::uint8_t> render_map(const LabelMap& map, const Palette& palette) {
    if (map.labels.size() != map.height * map.width) {
        throw InputError("render_map: label count does not match height x width");
    }
    const std::string header =
        "P6\n" + std::to_string(map.width) + " " + std::to_string(map.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(header.size() + 3 * map.labels.size());
    for (std::size_t i = 0; i < map.labels.size(); ++i) {
        const std::uint16_t l = map.labels[i];
        if (l > palette.colors.size()) {
            throw InputError("render_map: label " + std::to_string(l) + " at cell " + std::to_string(i) +
                             " exceeds palette size " + std::to_string(palette.colors.size()));
        }
        const hsi::Rgb& c = l == 0 ? palette.background : palette.colors[l - 1];
        out.insert(out.end(), c.begin(), c.end());
    }
    return out;
}

void write_map(const std::filesystem::path& path, const LabelMap& map, const Palette& palette) {
    hsi::write_bytes(path, render_map(map, palette));
}

LabelMap ground_truth_map(const hsi::GroundTruth& gt) {
    return {gt.height, gt.width, gt.labels};
}

LabelMap predict_full_scene(const kan::Model& model, const hsi::HsiCube& cube,
                            const hsi::BandStats& stats, std::size_t batch_size, unsigned threads) {
    if (model.input_dim() != cube.bands) {
        throw InputError("predict_full_scene: model expects " + std::to_string(model.input_dim()) +
                         " bands, cube has " + std::to_string(cube.bands));
    }
    if (batch_size == 0) {
        throw InputError("predict_full_scene: batch_size must be positive");
    }
    const hsi::StandardizedCube view(cube, stats);
    LabelMap map{cube.height, cube.width, std::vector<std::uint16_t>(cube.pixel_count(), 0)};
    std::vector<std::size_t> idx;
    for (std::size_t begin = 0; begin < cube.pixel_count(); begin += batch_size) {
        const std::size_t end = std::min(cube.pixel_count(), begin + batch_size);
        idx.resize(end - begin);
        std::iota(idx.begin(), idx.end(), begin);
        const auto pred = kan::argmax_rows(model.infer(view.rows(idx), threads));
        for (std::size_t r = 0; r < pred.size(); ++r) {
            map.labels[begin + r] = static_cast<std::uint16_t>(pred[r] + 1);
        }
    }
    return map;
}

}  // namespace kanhsi::mapviz
