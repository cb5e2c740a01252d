#include "kanhsi/kan/splinekan_layer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kanhsi/errors.hpp"

namespace kanhsi::kan {

double silu(double x) noexcept {
    return x / (1.0 + std::exp(-x));
}

double silu_derivative(double x) noexcept {
    const double sig = 1.0 / (1.0 + std::exp(-x));
    return sig * (1.0 + x * (1.0 - sig));
}

SplineKanLayer::SplineKanLayer(std::size_t in_dim, std::size_t out_dim, SplineGrid grid)
    : in_(in_dim), out_(out_dim), grid_(grid),
      basis_(BSplineBasis::uniform(grid.intervals, grid.order, grid.lo, grid.hi)) {
    if (in_ == 0 || out_ == 0) {
        throw InputError("SplineKanLayer: dimensions must be positive");
    }
    params_.assign(n_coeffs() + in_ * out_, 0.0);
    grads_.assign(params_.size(), 0.0);
}

namespace {

struct SplineEval {
    std::vector<double> values;
    std::vector<double> derivs;
    std::vector<double> scratch;
};

}  // namespace

nn::Matrix SplineKanLayer::infer(const nn::Matrix& x) const {
    if (x.cols() != in_) {
        throw InputError("SplineKanLayer: input has " + std::to_string(x.cols()) +
                         " columns, expected " + std::to_string(in_));
    }
    const std::size_t nb = basis_.size();
    const auto coeffs = std::span(params_).first(n_coeffs());
    const auto wb = std::span(params_).subspan(n_coeffs());
    std::vector<double> vals(in_ * nb);
    std::vector<double> si(in_);
    std::vector<double> scratch(basis_.knots().size());

    nn::Matrix out(x.rows(), out_);
    for (std::size_t n = 0; n < x.rows(); ++n) {
        const auto xr = x.row(n);
        for (std::size_t i = 0; i < in_; ++i) {
            basis_.evaluate(xr[i], std::span(vals).subspan(i * nb, nb), {}, scratch);
            si[i] = silu(xr[i]);
        }
        for (std::size_t j = 0; j < out_; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < in_; ++i) {
                const std::size_t e = j * in_ + i;
                double phi = wb[e] * si[i];
                const double* c = coeffs.data() + e * nb;
                const double* b = vals.data() + i * nb;
                for (std::size_t m = 0; m < nb; ++m) {
                    phi += c[m] * b[m];
                }
                acc += phi;
            }
            out(n, j) = acc;
        }
    }
    return out;
}

nn::Matrix SplineKanLayer::forward(const nn::Matrix& x) {
    nn::Matrix out = infer(x);
    const std::size_t nb = basis_.size();
    basis_cache_.resize(x.rows() * in_ * nb);
    dbasis_cache_.resize(x.rows() * in_ * nb);
    silu_cache_.resize(x.rows() * in_);
    dsilu_cache_.resize(x.rows() * in_);
    std::vector<double> scratch(basis_.knots().size());
    for (std::size_t n = 0; n < x.rows(); ++n) {
        for (std::size_t i = 0; i < in_; ++i) {
            const std::size_t c = n * in_ + i;
            const double v = x(n, i);
            basis_.evaluate(v, std::span(basis_cache_).subspan(c * nb, nb),
                            std::span(dbasis_cache_).subspan(c * nb, nb), scratch);
            silu_cache_[c] = silu(v);
            dsilu_cache_[c] = silu_derivative(v);
        }
    }
    cached_rows_ = x.rows();
    has_cache_ = true;
    return out;
}

nn::Matrix SplineKanLayer::backward(const nn::Matrix& grad_out) {
    if (!has_cache_) {
        throw StateError("SplineKanLayer: backward called before forward");
    }
    if (grad_out.rows() != cached_rows_ || grad_out.cols() != out_) {
        throw InputError("SplineKanLayer: grad_out shape does not match last forward");
    }
    const std::size_t nb = basis_.size();
    const auto coeffs = std::span(params_).first(n_coeffs());
    const auto wb = std::span(params_).subspan(n_coeffs());
    std::fill(grads_.begin(), grads_.end(), 0.0);
    auto gc = std::span(grads_).first(n_coeffs());
    auto gwb = std::span(grads_).subspan(n_coeffs());

    nn::Matrix grad_x(cached_rows_, in_);
    for (std::size_t n = 0; n < cached_rows_; ++n) {
        for (std::size_t j = 0; j < out_; ++j) {
            const double g = grad_out(n, j);
            if (g == 0.0) continue;
            for (std::size_t i = 0; i < in_; ++i) {
                const std::size_t e = j * in_ + i;
                const std::size_t c = n * in_ + i;
                const double* b = basis_cache_.data() + c * nb;
                const double* db = dbasis_cache_.data() + c * nb;
                const double* ce = coeffs.data() + e * nb;
                double* gce = gc.data() + e * nb;
                double dphi = wb[e] * dsilu_cache_[c];
                for (std::size_t m = 0; m < nb; ++m) {
                    gce[m] += g * b[m];
                    dphi += ce[m] * db[m];
                }
                gwb[e] += g * silu_cache_[c];
                grad_x(n, i) += g * dphi;
            }
        }
    }
    return grad_x;
}

}  // namespace kanhsi::kan
