#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "kanhsi/kan/dense_layer.hpp"
#include "kanhsi/kan/splinekan_layer.hpp"
#include "kanhsi/kan/wavelets.hpp"
#include "kanhsi/nn/layer.hpp"
#include "kanhsi/nn/rng.hpp"

namespace kanhsi::kan {

enum class LayerKind { WaveletKan, SplineKan, Dense };

std::string to_string(LayerKind kind);
LayerKind parse_layer_kind(std::string_view name);

/// Declarative description of one layer.
struct LayerSpec {
    LayerKind kind = LayerKind::Dense;
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    MotherWavelet mother = MotherWavelet::MexicanHat;  // WaveletKan
    SplineGrid grid{};                                 // SplineKan
    Activation activation = Activation::Identity;      // Dense

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

enum class ModelFamily { WavKan, SplineKan, Mlp };

std::string to_string(ModelFamily family);
ModelFamily parse_model_family(std::string_view name);

struct ModelSpec {
    ModelFamily family = ModelFamily::WavKan;
    std::vector<LayerSpec> layers;

    std::size_t input_dim() const { return layers.empty() ? 0 : layers.front().in_dim; }
    std::size_t output_dim() const { return layers.empty() ? 0 : layers.back().out_dim; }

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct ArchitectureOptions {
    MotherWavelet mother = MotherWavelet::MexicanHat;
    SplineGrid grid{};
    Activation hidden_activation = Activation::SiLU;
};

/// Builds [input, hidden..., classes]. MLP hidden layers use
/// options.hidden_activation and the output layer is linear.
ModelSpec make_model_spec(ModelFamily family, std::size_t input_dim,
                          std::span<const std::size_t> hidden, std::size_t n_classes,
                          const ArchitectureOptions& options = {});

/// Default hidden widths per family: wavkan/splinekan {32}, mlp {128, 64}.
std::vector<std::size_t> default_hidden_widths(ModelFamily family);

struct LayerParams {
    LayerSpec spec;
    std::vector<double> values;
};

/// Glorot-uniform weights (wavelet weights, spline base weights, dense W),
/// zero translations and biases, unit dilations, spline coefficients
/// uniform in +-0.1 / intervals.
LayerParams init_layer_params(const LayerSpec& spec, nn::Rng& rng);

std::unique_ptr<nn::Layer> make_layer(const LayerSpec& spec);
std::size_t parameter_count(const LayerSpec& spec);
std::size_t parameter_count(const ModelSpec& spec);

/// A feed-forward stack of layers built from a ModelSpec.
class Model {
public:
    explicit Model(ModelSpec spec);
    /// Builds and initializes every layer from `rng` in order.
    Model(ModelSpec spec, nn::Rng& rng);

    const ModelSpec& spec() const noexcept { return spec_; }
    std::size_t input_dim() const { return spec_.input_dim(); }
    std::size_t output_dim() const { return spec_.output_dim(); }
    std::size_t parameter_count() const;

    std::span<const std::unique_ptr<nn::Layer>> layers() const { return layers_; }
    nn::Layer& layer(std::size_t i) { return *layers_.at(i); }

    nn::Matrix forward(const nn::Matrix& x);
    void backward(const nn::Matrix& grad_logits);

    /// Pure evaluation with frozen parameters. Rows are split over
    /// `threads` workers (0 = hardware concurrency); each row is computed
    /// exactly as in the serial path so the result is bit-identical.
    nn::Matrix infer(const nn::Matrix& x, unsigned threads = 1) const;

    std::vector<double> flat_parameters() const;
    void set_flat_parameters(std::span<const double> values);

    void project_parameters();

private:
    ModelSpec spec_;
    std::vector<std::unique_ptr<nn::Layer>> layers_;
};

/// argmax per row, ties broken toward the lowest index.
std::vector<std::size_t> argmax_rows(const nn::Matrix& scores);

}  // namespace kanhsi::kan
