#include "kanhsi/app/synthetic.hpp"

#include <cmath>

#include "kanhsi/errors.hpp"
#include "kanhsi/hsi/npy.hpp"
#include "kanhsi/nn/rng.hpp"

namespace kanhsi::app {

hsi::HsiDataset make_blobs(const BlobOptions& o) {
    if (o.classes == 0 || o.classes > o.bands || o.height < o.classes) {
        throw InputError("make_blobs: need 1 <= classes <= bands and height >= classes");
    }
    hsi::HsiDataset ds;
    ds.manifest.dataset = "synthetic_blobs";
    for (std::size_t c = 0; c < o.classes; ++c) {
        ds.manifest.class_names.push_back("blob_" + std::to_string(c + 1));
    }
    ds.cube = {"synthetic_blobs", o.height, o.width, o.bands, std::vector<float>(o.height * o.width * o.bands)};
    ds.gt = {o.height, o.width, std::vector<std::uint16_t>(o.height * o.width), ds.manifest.class_names};

    const double offset = o.separation / std::sqrt(2.0);
    nn::Rng rng(o.seed);
    for (std::size_t r = 0; r < o.height; ++r) {
        const std::size_t cls = r * o.classes / o.height;
        for (std::size_t col = 0; col < o.width; ++col) {
            const std::size_t p = r * o.width + col;
            ds.gt.labels[p] = (r + col) % 7 == 0 ? 0 : static_cast<std::uint16_t>(cls + 1);
            for (std::size_t b = 0; b < o.bands; ++b) {
                const double mean = 10.0 + (b == cls ? offset : 0.0);
                ds.cube.values[p * o.bands + b] = static_cast<float>(mean + rng.normal());
            }
        }
    }
    return ds;
}

std::filesystem::path write_dataset(const hsi::HsiDataset& ds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::size_t cube_shape[] = {ds.cube.height, ds.cube.width, ds.cube.bands};
    const std::size_t gt_shape[] = {ds.gt.height, ds.gt.width};
    hsi::write_npy<float>(dir / "cube.npy", cube_shape, ds.cube.values);
    hsi::write_npy<std::uint16_t>(dir / "gt.npy", gt_shape, ds.gt.labels);

    hsi::DatasetManifest m = ds.manifest;
    m.cube = "cube.npy";
    m.gt = "gt.npy";
    m.height = ds.cube.height;
    m.width = ds.cube.width;
    m.bands = ds.cube.bands;
    const auto hist = ds.gt.histogram();
    m.class_counts = std::vector<std::size_t>(hist.begin() + 1, hist.begin() + 1 + static_cast<std::ptrdiff_t>(ds.gt.n_classes()));
    const auto path = dir / "manifest.json";
    hsi::save_manifest(m, path);
    return path;
}

}  // namespace kanhsi::app
