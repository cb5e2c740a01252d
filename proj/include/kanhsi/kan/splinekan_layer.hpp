#pragma once

#include <span>
#include <vector>

#include "kanhsi/kan/bspline.hpp"
#include "kanhsi/nn/layer.hpp"

namespace kanhsi::kan {

struct SplineGrid {
    std::size_t intervals = 8;
    int order = 3;  // quadratic pieces
    double lo = -2.0;
    double hi = 2.0;

    friend bool operator==(const SplineGrid&, const SplineGrid&) = default;
};

/// B-spline KAN layer:
///
///     phi_ji(x) = wb[j][i] * silu(x) + sum_m c[j][i][m] * B_m(x)
///     out[n][j] = sum_i phi_ji(x[n][i])
///
/// Parameter layout: c (out x in x basis_size), then wb (out x in).
/// The grid is static. Inputs outside [lo, hi] are clamped for the spline
/// term and get no spline-path input gradient.
class SplineKanLayer final : public nn::Layer {
public:
    SplineKanLayer(std::size_t in_dim, std::size_t out_dim, SplineGrid grid = {});

    std::string kind() const override { return "splinekan"; }
    std::size_t in_dim() const override { return in_; }
    std::size_t out_dim() const override { return out_; }
    const SplineGrid& grid() const noexcept { return grid_; }
    const BSplineBasis& basis() const noexcept { return basis_; }
    std::size_t basis_size() const noexcept { return basis_.size(); }

    nn::Matrix forward(const nn::Matrix& x) override;
    nn::Matrix backward(const nn::Matrix& grad_out) override;
    nn::Matrix infer(const nn::Matrix& x) const override;

    std::span<double> parameters() override { return params_; }
    std::span<const double> parameters() const override { return params_; }
    std::span<const double> gradients() const override { return grads_; }

    std::span<double> coefficients() { return std::span(params_).first(n_coeffs()); }
    std::span<double> base_weights() { return std::span(params_).subspan(n_coeffs()); }
    std::span<const double> grad_coefficients() const { return std::span(grads_).first(n_coeffs()); }
    std::span<const double> grad_base_weights() const { return std::span(grads_).subspan(n_coeffs()); }

private:
    std::size_t n_coeffs() const noexcept { return out_ * in_ * basis_.size(); }

    std::size_t in_;
    std::size_t out_;
    SplineGrid grid_;
    BSplineBasis basis_;
    std::vector<double> params_;
    std::vector<double> grads_;

    // Per (n, i): basis values / derivatives, silu and silu'.
    std::size_t cached_rows_ = 0;
    bool has_cache_ = false;
    std::vector<double> basis_cache_;
    std::vector<double> dbasis_cache_;
    std::vector<double> silu_cache_;
    std::vector<double> dsilu_cache_;
};

double silu(double x) noexcept;
double silu_derivative(double x) noexcept;

}  // namespace kanhsi::kan
