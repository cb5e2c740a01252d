#include "kanhsi/kan/dense_layer.hpp"

#include <algorithm>
#include <cmath>

#include "kanhsi/errors.hpp"
#include "kanhsi/kan/splinekan_layer.hpp"

namespace kanhsi::kan {

std::string to_string(Activation act) {
    switch (act) {
        case Activation::Identity:
            return "identity";
        case Activation::ReLU:
            return "relu";
        case Activation::SiLU:
            return "silu";
    }
    return "unknown";
}

Activation parse_activation(std::string_view name) {
    if (name == "identity") return Activation::Identity;
    if (name == "relu") return Activation::ReLU;
    if (name == "silu") return Activation::SiLU;
    throw InputError("unknown activation '" + std::string(name) + "'");
}

namespace {

double apply(Activation act, double v) noexcept {
    switch (act) {
        case Activation::Identity:
            return v;
        case Activation::ReLU:
            return v > 0.0 ? v : 0.0;
        case Activation::SiLU:
            return silu(v);
    }
    return v;
}

// ReLU subgradient at 0 is 0.
double derivative(Activation act, double v) noexcept {
    switch (act) {
        case Activation::Identity:
            return 1.0;
        case Activation::ReLU:
            return v > 0.0 ? 1.0 : 0.0;
        case Activation::SiLU:
            return silu_derivative(v);
    }
    return 1.0;
}

}  // namespace

DenseLayer::DenseLayer(std::size_t in_dim, std::size_t out_dim, Activation act)
    : in_(in_dim), out_(out_dim), act_(act), params_(in_dim * out_dim + out_dim, 0.0),
      grads_(params_.size(), 0.0) {
    if (in_ == 0 || out_ == 0) {
        throw InputError("DenseLayer: dimensions must be positive");
    }
}

nn::Matrix DenseLayer::preactivation(const nn::Matrix& x) const {
    if (x.cols() != in_) {
        throw InputError("DenseLayer: input has " + std::to_string(x.cols()) +
                         " columns, expected " + std::to_string(in_));
    }
    const double* w = params_.data();
    const double* b = params_.data() + in_ * out_;
    nn::Matrix pre(x.rows(), out_);
    for (std::size_t n = 0; n < x.rows(); ++n) {
        const auto xr = x.row(n);
        for (std::size_t j = 0; j < out_; ++j) {
            double acc = b[j];
            const double* wr = w + j * in_;
            for (std::size_t i = 0; i < in_; ++i) {
                acc += wr[i] * xr[i];
            }
            pre(n, j) = acc;
        }
    }
    return pre;
}

nn::Matrix DenseLayer::infer(const nn::Matrix& x) const {
    nn::Matrix y = preactivation(x);
    for (double& v : y.values()) {
        v = apply(act_, v);
    }
    return y;
}

nn::Matrix DenseLayer::forward(const nn::Matrix& x) {
    x_cache_ = x;
    pre_cache_ = preactivation(x);
    has_cache_ = true;
    nn::Matrix y = pre_cache_;
    for (double& v : y.values()) {
        v = apply(act_, v);
    }
    return y;
}

nn::Matrix DenseLayer::backward(const nn::Matrix& grad_out) {
    if (!has_cache_) {
        throw StateError("DenseLayer: backward called before forward");
    }
    if (grad_out.rows() != pre_cache_.rows() || grad_out.cols() != out_) {
        throw InputError("DenseLayer: grad_out shape does not match last forward");
    }
    std::fill(grads_.begin(), grads_.end(), 0.0);
    double* gw = grads_.data();
    double* gb = grads_.data() + in_ * out_;
    const double* w = params_.data();

    nn::Matrix grad_x(x_cache_.rows(), in_);
    for (std::size_t n = 0; n < x_cache_.rows(); ++n) {
        const auto xr = x_cache_.row(n);
        auto gx = grad_x.row(n);
        for (std::size_t j = 0; j < out_; ++j) {
            const double d = grad_out(n, j) * derivative(act_, pre_cache_(n, j));
            if (d == 0.0) continue;
            gb[j] += d;
            double* gwr = gw + j * in_;
            const double* wr = w + j * in_;
            for (std::size_t i = 0; i < in_; ++i) {
                gwr[i] += d * xr[i];
                gx[i] += d * wr[i];
            }
        }
    }
    return grad_x;
}

}  // namespace kanhsi::kan
