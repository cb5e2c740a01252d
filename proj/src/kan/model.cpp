#include "kanhsi/kan/model.hpp"

#include <algorithm>
#include <string>
#include <thread>

#include "kanhsi/errors.hpp"
#include "kanhsi/kan/wavkan_layer.hpp"
#include "kanhsi/nn/init.hpp"

namespace kanhsi::kan {

std::string to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::WaveletKan:
            return "wavkan";
        case LayerKind::SplineKan:
            return "splinekan";
        case LayerKind::Dense:
            return "dense";
    }
    return "unknown";
}

LayerKind parse_layer_kind(std::string_view name) {
    if (name == "wavkan") return LayerKind::WaveletKan;
    if (name == "splinekan") return LayerKind::SplineKan;
    if (name == "dense") return LayerKind::Dense;
    throw InputError("unknown layer kind '" + std::string(name) + "'");
}

std::string to_string(ModelFamily family) {
    switch (family) {
        case ModelFamily::WavKan:
            return "wavkan";
        case ModelFamily::SplineKan:
            return "splinekan";
        case ModelFamily::Mlp:
            return "mlp";
    }
    return "unknown";
}

ModelFamily parse_model_family(std::string_view name) {
    if (name == "wavkan") return ModelFamily::WavKan;
    if (name == "splinekan") return ModelFamily::SplineKan;
    if (name == "mlp") return ModelFamily::Mlp;
    throw InputError("unknown model family '" + std::string(name) + "'");
}

std::vector<std::size_t> default_hidden_widths(ModelFamily family) {
    if (family == ModelFamily::Mlp) {
        return {128, 64};
    }
    return {32};
}

ModelSpec make_model_spec(ModelFamily family, std::size_t input_dim,
                          std::span<const std::size_t> hidden, std::size_t n_classes,
                          const ArchitectureOptions& options) {
    if (input_dim == 0 || n_classes == 0) {
        throw InputError("make_model_spec: input width and class count must be positive");
    }
    std::vector<std::size_t> widths{input_dim};
    for (std::size_t h : hidden) {
        if (h == 0) {
            throw InputError("make_model_spec: hidden widths must be positive");
        }
        widths.push_back(h);
    }
    widths.push_back(n_classes);

    ModelSpec spec{family, {}};
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        LayerSpec ls;
        ls.in_dim = widths[l];
        ls.out_dim = widths[l + 1];
        switch (family) {
            case ModelFamily::WavKan:
                ls.kind = LayerKind::WaveletKan;
                ls.mother = options.mother;
                break;
            case ModelFamily::SplineKan:
                ls.kind = LayerKind::SplineKan;
                ls.grid = options.grid;
                break;
            case ModelFamily::Mlp:
                ls.kind = LayerKind::Dense;
                ls.activation =
                    l + 2 == widths.size() ? Activation::Identity : options.hidden_activation;
                break;
        }
        spec.layers.push_back(ls);
    }
    return spec;
}

std::unique_ptr<nn::Layer> make_layer(const LayerSpec& spec) {
    switch (spec.kind) {
        case LayerKind::WaveletKan:
            return std::make_unique<WaveletKanLayer>(spec.in_dim, spec.out_dim, spec.mother);
        case LayerKind::SplineKan:
            return std::make_unique<SplineKanLayer>(spec.in_dim, spec.out_dim, spec.grid);
        case LayerKind::Dense:
            return std::make_unique<DenseLayer>(spec.in_dim, spec.out_dim, spec.activation);
    }
    throw InputError("make_layer: bad layer kind");
}

std::size_t parameter_count(const LayerSpec& spec) {
    const std::size_t edges = spec.in_dim * spec.out_dim;
    switch (spec.kind) {
        case LayerKind::WaveletKan:
            return 3 * edges;
        case LayerKind::SplineKan:
            return edges * (spec.grid.intervals + static_cast<std::size_t>(spec.grid.order) - 1) +
                   edges;
        case LayerKind::Dense:
            return edges + spec.out_dim;
    }
    return 0;
}

std::size_t parameter_count(const ModelSpec& spec) {
    std::size_t n = 0;
    for (const auto& l : spec.layers) {
        n += parameter_count(l);
    }
    return n;
}

LayerParams init_layer_params(const LayerSpec& spec, nn::Rng& rng) {
    if (spec.in_dim == 0 || spec.out_dim == 0) {
        throw InputError("init_layer_params: dimensions must be positive");
    }
    const std::size_t edges = spec.in_dim * spec.out_dim;
    LayerParams p{spec, std::vector<double>(parameter_count(spec), 0.0)};
    auto v = std::span(p.values);
    switch (spec.kind) {
        case LayerKind::WaveletKan:
            nn::fill_glorot(v.first(edges), spec.in_dim, spec.out_dim, rng);
            // translations stay 0
            std::fill(v.begin() + static_cast<std::ptrdiff_t>(2 * edges), v.end(), 1.0);
            break;
        case LayerKind::SplineKan: {
            const std::size_t n_coeffs = v.size() - edges;
            nn::fill_uniform(v.first(n_coeffs), 0.1 / static_cast<double>(spec.grid.intervals), rng);
            nn::fill_glorot(v.subspan(n_coeffs), spec.in_dim, spec.out_dim, rng);
            break;
        }
        case LayerKind::Dense:
            nn::fill_glorot(v.first(edges), spec.in_dim, spec.out_dim, rng);
            break;
    }
    return p;
}

Model::Model(ModelSpec spec) : spec_(std::move(spec)) {
    if (spec_.layers.empty()) {
        throw InputError("Model: no layers");
    }
    for (std::size_t l = 0; l < spec_.layers.size(); ++l) {
        if (l > 0 && spec_.layers[l].in_dim != spec_.layers[l - 1].out_dim) {
            throw InputError("Model: layer " + std::to_string(l) + " input width " +
                             std::to_string(spec_.layers[l].in_dim) + " != previous output " +
                             std::to_string(spec_.layers[l - 1].out_dim));
        }
        layers_.push_back(make_layer(spec_.layers[l]));
    }
}

Model::Model(ModelSpec spec, nn::Rng& rng) : Model(std::move(spec)) {
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const LayerParams p = init_layer_params(spec_.layers[l], rng);
        auto dst = layers_[l]->parameters();
        std::copy(p.values.begin(), p.values.end(), dst.begin());
    }
}

std::size_t Model::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) {
        n += l->parameters().size();
    }
    return n;
}

nn::Matrix Model::forward(const nn::Matrix& x) {
    nn::Matrix h = layers_.front()->forward(x);
    for (std::size_t l = 1; l < layers_.size(); ++l) {
        h = layers_[l]->forward(h);
    }
    return h;
}

void Model::backward(const nn::Matrix& grad_logits) {
    nn::Matrix g = grad_logits;
    for (std::size_t l = layers_.size(); l-- > 0;) {
        g = layers_[l]->backward(g);
    }
}

nn::Matrix Model::infer(const nn::Matrix& x, unsigned threads) const {
    auto run = [this](const nn::Matrix& in) {
        nn::Matrix h = layers_.front()->infer(in);
        for (std::size_t l = 1; l < layers_.size(); ++l) {
            h = layers_[l]->infer(h);
        }
        return h;
    };
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    const std::size_t n = x.rows();
    const std::size_t workers = std::min<std::size_t>(threads, n / 256 + 1);
    if (workers <= 1) {
        return run(x);
    }

    nn::Matrix out(n, output_dim());
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = n * w / workers;
            const std::size_t end = n * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] {
                try {
                    const nn::Matrix part = run(x.slice_rows(begin, end));
                    std::copy(part.values().begin(), part.values().end(),
                              out.values().begin() + static_cast<std::ptrdiff_t>(begin * out.cols()));
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

std::vector<double> Model::flat_parameters() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    for (const auto& l : layers_) {
        const auto p = std::as_const(*l).parameters();
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

void Model::set_flat_parameters(std::span<const double> values) {
    if (values.size() != parameter_count()) {
        throw InputError("Model::set_flat_parameters: expected " +
                         std::to_string(parameter_count()) + " values, got " +
                         std::to_string(values.size()));
    }
    std::size_t offset = 0;
    for (auto& l : layers_) {
        auto dst = l->parameters();
        std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(offset), dst.size(), dst.begin());
        offset += dst.size();
    }
}

void Model::project_parameters() {
    for (auto& l : layers_) {
        l->project_parameters();
    }
}

std::vector<std::size_t> argmax_rows(const nn::Matrix& scores) {
    std::vector<std::size_t> out(scores.rows(), 0);
    for (std::size_t r = 0; r < scores.rows(); ++r) {
        const auto row = scores.row(r);
        std::size_t best = 0;
        for (std::size_t c = 1; c < row.size(); ++c) {
            if (row[c] > row[best]) best = c;
        }
        out[r] = best;
    }
    return out;
}

}  // namespace kanhsi::kan
