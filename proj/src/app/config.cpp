#include "kanhsi/app/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "kanhsi/errors.hpp"

namespace kanhsi::app {

using nlohmann::json;

std::vector<std::size_t> TrainConfig::hidden_widths() const {
    return hidden.empty() ? kan::default_hidden_widths(model) : hidden;
}

kan::ArchitectureOptions TrainConfig::architecture() const {
    return {wavelet, spline, mlp_activation};
}

void TrainConfig::validate() const {
    for (std::size_t h : hidden) {
        if (h == 0) throw InputError("config: hidden widths must be positive");
    }
    if (epochs < 1) throw InputError("config: epochs must be >= 1");
    if (batch_size < 1) throw InputError("config: batch_size must be >= 1");
    if (!(fraction > 0.0 && fraction < 1.0)) throw InputError("config: fraction must lie in (0, 1)");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw InputError("config: learning_rate must be positive");
    }
    if (spline.intervals < 1 || spline.order < 1 || !(spline.lo < spline.hi)) {
        throw InputError("config: spline grid needs intervals >= 1, order >= 1, lo < hi");
    }
}

json experiment_json(const TrainConfig& c) {
    json j;
    j["manifest"] = c.manifest.generic_string();
    j["model"] = kan::to_string(c.model);
    j["hidden"] = c.hidden_widths();
    j["wavelet"] = kan::to_string(c.wavelet);
    j["spline"] = {{"intervals", c.spline.intervals},
                   {"order", c.spline.order},
                   {"lo", c.spline.lo},
                   {"hi", c.spline.hi}};
    j["mlp_activation"] = kan::to_string(c.mlp_activation);
    j["epochs"] = c.epochs;
    j["batch_size"] = c.batch_size;
    j["learning_rate"] = c.learning_rate;
    j["fraction"] = c.fraction;
    j["seed"] = c.seed;
    j["eval_every"] = c.eval_every;
    return j;
}

TrainConfig config_from_json(const json& j) {
    TrainConfig c;
    try {
        if (j.contains("manifest")) c.manifest = j.at("manifest").get<std::string>();
        if (j.contains("model")) c.model = kan::parse_model_family(j.at("model").get<std::string>());
        if (j.contains("hidden")) c.hidden = j.at("hidden").get<std::vector<std::size_t>>();
        if (j.contains("wavelet")) c.wavelet = kan::parse_mother_wavelet(j.at("wavelet").get<std::string>());
        if (j.contains("spline")) {
            const auto& s = j.at("spline");
            c.spline.intervals = s.value("intervals", c.spline.intervals);
            c.spline.order = s.value("order", c.spline.order);
            c.spline.lo = s.value("lo", c.spline.lo);
            c.spline.hi = s.value("hi", c.spline.hi);
        }
        if (j.contains("mlp_activation")) {
            c.mlp_activation = kan::parse_activation(j.at("mlp_activation").get<std::string>());
        }
        c.epochs = j.value("epochs", c.epochs);
        c.batch_size = j.value("batch_size", c.batch_size);
        c.learning_rate = j.value("learning_rate", c.learning_rate);
        c.fraction = j.value("fraction", c.fraction);
        c.seed = j.value("seed", c.seed);
        c.eval_every = j.value("eval_every", c.eval_every);
        if (j.contains("checkpoint")) c.checkpoint_out = j.at("checkpoint").get<std::string>();
        if (j.contains("metrics")) c.metrics_out = j.at("metrics").get<std::string>();
    } catch (const json::exception& e) {
        throw InputError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

TrainConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError("config '" + path.string() + "': " + e.what(), e.byte);
    }
    TrainConfig c = config_from_json(j);
    const auto dir = path.parent_path();
    auto resolve = [&](std::filesystem::path& p) {
        if (!p.empty() && p.is_relative()) p = (dir / p).lexically_normal();
    };
    resolve(c.manifest);
    if (c.checkpoint_out) resolve(*c.checkpoint_out);
    if (c.metrics_out) resolve(*c.metrics_out);
    return c;
}

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string config_hash(const TrainConfig& config) {
    json j = experiment_json(config);
    // The manifest location is not part of the experiment's identity.
    j.erase("manifest");
    const std::string s = j.dump();
    return hex64(fnv1a64(s.data(), s.size()));
}

json to_json(const kan::ModelSpec& spec) {
    json layers = json::array();
    for (const auto& l : spec.layers) {
        json L{{"kind", kan::to_string(l.kind)}, {"in", l.in_dim}, {"out", l.out_dim}};
        switch (l.kind) {
            case kan::LayerKind::WaveletKan:
                L["wavelet"] = kan::to_string(l.mother);
                break;
            case kan::LayerKind::SplineKan:
                L["grid"] = {{"intervals", l.grid.intervals},
                             {"order", l.grid.order},
                             {"lo", l.grid.lo},
                             {"hi", l.grid.hi}};
                break;
            case kan::LayerKind::Dense:
                L["activation"] = kan::to_string(l.activation);
                break;
        }
        layers.push_back(L);
    }
    return {{"family", kan::to_string(spec.family)}, {"layers", layers}};
}

kan::ModelSpec model_spec_from_json(const json& j) {
    kan::ModelSpec spec;
    spec.family = kan::parse_model_family(j.at("family").get<std::string>());
    for (const auto& L : j.at("layers")) {
        kan::LayerSpec l;
        l.kind = kan::parse_layer_kind(L.at("kind").get<std::string>());
        l.in_dim = L.at("in").get<std::size_t>();
        l.out_dim = L.at("out").get<std::size_t>();
        if (l.kind == kan::LayerKind::WaveletKan) {
            l.mother = kan::parse_mother_wavelet(L.at("wavelet").get<std::string>());
        } else if (l.kind == kan::LayerKind::SplineKan) {
            const auto& g = L.at("grid");
            l.grid = {g.at("intervals").get<std::size_t>(), g.at("order").get<int>(),
                      g.at("lo").get<double>(), g.at("hi").get<double>()};
        } else {
            l.activation = kan::parse_activation(L.at("activation").get<std::string>());
        }
        spec.layers.push_back(l);
    }
    return spec;
}

}  // namespace kanhsi::app
