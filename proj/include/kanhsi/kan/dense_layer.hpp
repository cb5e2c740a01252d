#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kanhsi/nn/layer.hpp"

namespace kanhsi::kan {

enum class Activation { Identity, ReLU, SiLU };

std::string to_string(Activation act);
Activation parse_activation(std::string_view name);

/// y = act(W x + b). Parameter layout: W (out x in), then b (out).
class DenseLayer final : public nn::Layer {
public:
    DenseLayer(std::size_t in_dim, std::size_t out_dim, Activation act);

    std::string kind() const override { return "dense"; }
    std::size_t in_dim() const override { return in_; }
    std::size_t out_dim() const override { return out_; }
    Activation activation() const noexcept { return act_; }

    nn::Matrix forward(const nn::Matrix& x) override;
    nn::Matrix backward(const nn::Matrix& grad_out) override;
    nn::Matrix infer(const nn::Matrix& x) const override;

    std::span<double> parameters() override { return params_; }
    std::span<const double> parameters() const override { return params_; }
    std::span<const double> gradients() const override { return grads_; }

    std::span<double> weights() { return std::span(params_).first(in_ * out_); }
    std::span<double> bias() { return std::span(params_).subspan(in_ * out_); }

private:
    nn::Matrix preactivation(const nn::Matrix& x) const;

    std::size_t in_;
    std::size_t out_;
    Activation act_;
    std::vector<double> params_;
    std::vector<double> grads_;

    bool has_cache_ = false;
    nn::Matrix x_cache_;
    nn::Matrix pre_cache_;
};

}  // namespace kanhsi::kan
