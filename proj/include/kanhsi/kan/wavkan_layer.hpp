#pragma once

#include <span>
#include <vector>

#include "kanhsi/kan/wavelets.hpp"
#include "kanhsi/nn/layer.hpp"

namespace kanhsi::kan {

/// KAN layer whose edge functions are scaled and shifted mother wavelets:
///
///     out[n][j] = sum_i w[j][i] * psi((x[n][i] - t[j][i]) / s[j][i])
///
/// Parameter layout: w, then t, then s, each out_dim x in_dim row-major.
/// Dilations are kept >= kMinDilation by project_parameters().
class WaveletKanLayer final : public nn::Layer {
public:
    static constexpr double kMinDilation = 1e-3;

    /// Zero weights, zero translations, unit dilations.
    WaveletKanLayer(std::size_t in_dim, std::size_t out_dim, MotherWavelet mother);

    std::string kind() const override { return "wavkan"; }
    std::size_t in_dim() const override { return in_; }
    std::size_t out_dim() const override { return out_; }
    MotherWavelet mother() const noexcept { return mother_; }

    nn::Matrix forward(const nn::Matrix& x) override;
    nn::Matrix backward(const nn::Matrix& grad_out) override;
    nn::Matrix infer(const nn::Matrix& x) const override;

    std::span<double> parameters() override { return params_; }
    std::span<const double> parameters() const override { return params_; }
    std::span<const double> gradients() const override { return grads_; }
    void project_parameters() override;

    std::span<double> weights() { return std::span(params_).subspan(0, edges()); }
    std::span<double> translations() { return std::span(params_).subspan(edges(), edges()); }
    std::span<double> dilations() { return std::span(params_).subspan(2 * edges(), edges()); }
    std::span<const double> grad_weights() const { return std::span(grads_).subspan(0, edges()); }
    std::span<const double> grad_translations() const {
        return std::span(grads_).subspan(edges(), edges());
    }
    std::span<const double> grad_dilations() const {
        return std::span(grads_).subspan(2 * edges(), edges());
    }

private:
    std::size_t edges() const noexcept { return in_ * out_; }

    // Per (n, j, i): z, psi(z), psi'(z) from the last forward.
    struct Cache {
        std::size_t rows = 0;
        std::vector<double> z;
        std::vector<double> psi;
        std::vector<double> dpsi;
    };
    nn::Matrix compute(const nn::Matrix& x, Cache* cache) const;

    std::size_t in_;
    std::size_t out_;
    MotherWavelet mother_;
    std::vector<double> params_;
    std::vector<double> grads_;

    bool has_cache_ = false;
    Cache cache_;
};

}  // namespace kanhsi::kan
