#include "kanhsi/hsi/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "kanhsi/errors.hpp"
#include "kanhsi/hsi/npy.hpp"

namespace kanhsi::hsi {

using nlohmann::json;

void HsiCube::validate() const {
    if (height == 0 || width == 0 || bands == 0) {
        throw InputError("cube '" + name + "': dimensions must be positive");
    }
    if (values.size() != height * width * bands) {
        throw InputError("cube '" + name + "': value count does not match H x W x B");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw InputError("cube '" + name + "': non-finite value at element " + std::to_string(i));
        }
    }
}

std::vector<std::size_t> GroundTruth::histogram() const {
    std::size_t top = n_classes();
    for (auto l : labels) top = std::max<std::size_t>(top, l);
    std::vector<std::size_t> h(top + 1, 0);
    for (auto l : labels) ++h[l];
    return h;
}

std::size_t GroundTruth::labeled_count() const {
    return static_cast<std::size_t>(
        std::count_if(labels.begin(), labels.end(), [](std::uint16_t l) { return l != 0; }));
}

void GroundTruth::validate() const {
    if (height == 0 || width == 0) {
        throw InputError("ground truth: dimensions must be positive");
    }
    if (labels.size() != height * width) {
        throw InputError("ground truth: label count does not match H x W");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] > n_classes()) {
            throw InputError("ground truth: label " + std::to_string(labels[i]) + " at pixel " +
                             std::to_string(i) + " exceeds class count " +
                             std::to_string(n_classes()));
        }
    }
}

namespace {

Rgb parse_rgb(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) {
        throw InputError("manifest: " + where + " must be [r, g, b]");
    }
    Rgb c{};
    for (std::size_t k = 0; k < 3; ++k) {
        const int v = j.at(k).get<int>();
        if (v < 0 || v > 255) throw InputError("manifest: " + where + " component out of range");
        c[k] = static_cast<std::uint8_t>(v);
    }
    return c;
}

}  // namespace

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open manifest '" + path.string() + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError("manifest '" + path.string() + "': " + e.what(), e.byte);
    }

    DatasetManifest m;
    m.source = path;
    const auto dir = path.parent_path();
    try {
        m.dataset = j.at("dataset").get<std::string>();
        m.cube = dir / j.at("cube").get<std::string>();
        m.gt = dir / j.at("gt").get<std::string>();
        m.class_names = j.at("class_names").get<std::vector<std::string>>();
        if (j.contains("palette")) {
            for (const auto& c : j.at("palette")) m.palette.push_back(parse_rgb(c, "palette entry"));
        }
        if (j.contains("background")) m.background = parse_rgb(j.at("background"), "background");
        if (j.contains("height")) m.height = j.at("height").get<std::size_t>();
        if (j.contains("width")) m.width = j.at("width").get<std::size_t>();
        if (j.contains("bands")) m.bands = j.at("bands").get<std::size_t>();
        if (j.contains("class_counts")) {
            m.class_counts = j.at("class_counts").get<std::vector<std::size_t>>();
        }
    } catch (const json::exception& e) {
        throw FormatError("manifest '" + path.string() + "': " + e.what(), 0);
    }
    if (m.class_names.empty()) {
        throw InputError("manifest '" + path.string() + "': class_names is empty");
    }
    if (!m.palette.empty() && m.palette.size() != m.class_names.size()) {
        throw InputError("manifest '" + path.string() + "': palette has " +
                         std::to_string(m.palette.size()) + " entries for " +
                         std::to_string(m.class_names.size()) + " classes");
    }
    return m;
}

void save_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
    json j;
    j["dataset"] = m.dataset;
    j["cube"] = m.cube.filename().string();
    j["gt"] = m.gt.filename().string();
    j["class_names"] = m.class_names;
    if (!m.palette.empty()) j["palette"] = m.palette;
    j["background"] = m.background;
    if (m.height) j["height"] = *m.height;
    if (m.width) j["width"] = *m.width;
    if (m.bands) j["bands"] = *m.bands;
    if (m.class_counts) j["class_counts"] = *m.class_counts;
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write manifest '" + path.string() + "'");
    }
    out << j.dump(2) << '\n';
}

HsiCube cube_from_npy(const std::filesystem::path& path, std::string name) {
    const NpyArray arr = read_npy(path);
    if (arr.shape.size() != 3) {
        throw InputError("cube '" + path.string() + "': expected 3-D (H, W, B) array, got " +
                         std::to_string(arr.shape.size()) + "-D");
    }
    HsiCube cube;
    cube.name = std::move(name);
    cube.height = arr.shape[0];
    cube.width = arr.shape[1];
    cube.bands = arr.shape[2];
    cube.values = arr.as<float>();
    cube.validate();
    return cube;
}

GroundTruth gt_from_npy(const std::filesystem::path& path, std::vector<std::string> class_names) {
    const NpyArray arr = read_npy(path);
    if (arr.shape.size() != 2) {
        throw InputError("ground truth '" + path.string() + "': expected 2-D (H, W) array");
    }
    if (arr.dtype != DType::UInt8 && arr.dtype != DType::UInt16) {
        throw InputError("ground truth '" + path.string() + "': labels must be u1 or u2, got " +
                         descr(arr.dtype));
    }
    GroundTruth gt;
    gt.height = arr.shape[0];
    gt.width = arr.shape[1];
    gt.labels = arr.as<std::uint16_t>();
    gt.class_names = std::move(class_names);
    gt.validate();
    return gt;
}

HsiDataset load_dataset(const std::filesystem::path& manifest_path) {
    HsiDataset ds;
    ds.manifest = load_manifest(manifest_path);
    const auto& m = ds.manifest;
    ds.cube = cube_from_npy(m.cube, m.dataset);
    ds.gt = gt_from_npy(m.gt, m.class_names);
    if (ds.cube.height != ds.gt.height || ds.cube.width != ds.gt.width) {
        throw InputError("dataset '" + m.dataset + "': cube is " + std::to_string(ds.cube.height) +
                         "x" + std::to_string(ds.cube.width) + " but ground truth is " +
                         std::to_string(ds.gt.height) + "x" + std::to_string(ds.gt.width));
    }
    if ((m.height && *m.height != ds.cube.height) || (m.width && *m.width != ds.cube.width) ||
        (m.bands && *m.bands != ds.cube.bands)) {
        throw InputError("dataset '" + m.dataset + "': manifest dimensions disagree with files");
    }
    if (m.class_counts) {
        const auto hist = ds.gt.histogram();
        if (m.class_counts->size() != ds.gt.n_classes() ||
            !std::equal(m.class_counts->begin(), m.class_counts->end(), hist.begin() + 1)) {
            throw InputError("dataset '" + m.dataset + "': class_counts disagree with ground truth");
        }
    }
    return ds;
}

}  // namespace kanhsi::hsi
