#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "kanhsi/app/synthetic.hpp"
#include "kanhsi/errors.hpp"
#include "kanhsi/hsi/split.hpp"
#include "kanhsi/kan/model.hpp"
#include "kanhsi/mapviz/render.hpp"
#include "kanhsi/nn/rng.hpp"

using namespace kanhsi;
using mapviz::LabelMap;
using mapviz::Palette;

namespace {

std::string header_of(const std::vector<std::uint8_t>& ppm, std::size_t len) {
    return {ppm.begin(), ppm.begin() + static_cast<std::ptrdiff_t>(len)};
}

hsi::BandStats identity_stats(std::size_t bands) {
    return {std::vector<double>(bands, 0.0), std::vector<double>(bands, 1.0)};
}

}  // namespace

TEST_CASE("1x1 background map is one black pixel") {
    const auto ppm = mapviz::render_map(LabelMap{1, 1, {0}}, mapviz::default_palette(3));
    const std::string head = "P6\n1 1\n255\n";
    REQUIRE(ppm.size() == head.size() + 3);
    CHECK(header_of(ppm, head.size()) == head);
    CHECK(ppm[head.size()] == 0);
    CHECK(ppm[head.size() + 1] == 0);
    CHECK(ppm[head.size() + 2] == 0);
}

TEST_CASE("2x2 map emits the palette in raster order") {
    Palette pal{{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}, {10, 11, 12}}, {0, 0, 0}};
    const auto ppm = mapviz::render_map(LabelMap{2, 2, {1, 2, 3, 4}}, pal);
    const std::string head = "P6\n2 2\n255\n";
    REQUIRE(ppm.size() == head.size() + 12);
    CHECK(header_of(ppm, head.size()) == head);
    for (std::size_t i = 0; i < 12; ++i) CHECK(ppm[head.size() + i] == i + 1);
}

TEST_CASE("header gives width before height") {
    const LabelMap map{3, 5, std::vector<std::uint16_t>(15, 1)};
    const auto ppm = mapviz::render_map(map, mapviz::default_palette(1));
    CHECK(header_of(ppm, 11) == "P6\n5 3\n255\n");
    CHECK(ppm.size() == 11 + 45);
}

TEST_CASE("labels above the class count are rejected") {
    CHECK_THROWS_AS(mapviz::render_map(LabelMap{1, 2, {1, 3}}, mapviz::default_palette(2)), InputError);
    CHECK_THROWS_AS(mapviz::render_map(LabelMap{2, 2, {1}}, mapviz::default_palette(2)), InputError);
}

TEST_CASE("default palettes are distinct and never black") {
    for (std::size_t c : {1, 9, 16, 17, 40, 200}) {
        const auto pal = mapviz::default_palette(c);
        REQUIRE(pal.colors.size() == c);
        std::set<hsi::Rgb> seen(pal.colors.begin(), pal.colors.end());
        CHECK(seen.size() == c);
        CHECK(seen.count(hsi::Rgb{0, 0, 0}) == 0);
        CHECK_NOTHROW(pal.validate());
    }
    CHECK(mapviz::default_palette(12).colors == mapviz::default_palette(12).colors);
    Palette dup{{{1, 1, 1}, {1, 1, 1}}, {0, 0, 0}};
    CHECK_THROWS_AS(dup.validate(), InputError);
}

TEST_CASE("ground truth renders at the scene size") {
    const auto ds = app::make_blobs({});
    const auto map = mapviz::ground_truth_map(ds.gt);
    CHECK(map.height == 30);
    CHECK(map.width == 30);
    CHECK(map.labels == ds.gt.labels);
}

TEST_CASE("constant logits classify every pixel as class 1") {
    const auto ds = app::make_blobs({});
    const std::vector<std::size_t> hidden = {4};
    kan::Model model(kan::make_model_spec(kan::ModelFamily::Mlp, ds.cube.bands, hidden, 3));
    const std::vector<double> zeros(model.parameter_count(), 0.0);
    model.set_flat_parameters(zeros);
    const auto map = mapviz::predict_full_scene(model, ds.cube, identity_stats(ds.cube.bands));
    for (auto l : map.labels) REQUIRE(l == 1);
}

TEST_CASE("full-scene prediction does not depend on batch size or threads") {
    const auto ds = app::make_blobs({});
    const auto all = std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    const auto stats = hsi::compute_band_stats(ds.cube, all);
    for (auto family : {kan::ModelFamily::WavKan, kan::ModelFamily::SplineKan, kan::ModelFamily::Mlp}) {
        nn::Rng rng(9);
        const std::vector<std::size_t> hidden = {8};
        const kan::Model model(kan::make_model_spec(family, ds.cube.bands, hidden, 3), rng);
        const auto a = mapviz::predict_full_scene(model, ds.cube, stats, 1, 1);
        const auto b = mapviz::predict_full_scene(model, ds.cube, stats, 4096, 4);
        const auto c = mapviz::predict_full_scene(model, ds.cube, stats, 7, 0);
        CHECK(a == b);
        CHECK(a == c);
        CHECK(mapviz::render_map(a, mapviz::default_palette(3)) == mapviz::render_map(b, mapviz::default_palette(3)));
    }
}

TEST_CASE("band mismatch between model and cube is an input error") {
    const auto ds = app::make_blobs({});
    const std::vector<std::size_t> hidden = {4};
    const kan::Model model(kan::make_model_spec(kan::ModelFamily::Mlp, ds.cube.bands + 1, hidden, 3));
    CHECK_THROWS_AS(mapviz::predict_full_scene(model, ds.cube, identity_stats(ds.cube.bands)), InputError);
}
