#include "kanhsi/kan/wavkan_layer.hpp"

#include <algorithm>
#include <string>

#include "kanhsi/errors.hpp"

namespace kanhsi::kan {

WaveletKanLayer::WaveletKanLayer(std::size_t in_dim, std::size_t out_dim, MotherWavelet mother)
    : in_(in_dim), out_(out_dim), mother_(mother), params_(3 * in_dim * out_dim, 0.0),
      grads_(params_.size(), 0.0) {
    if (in_ == 0 || out_ == 0) {
        throw InputError("WaveletKanLayer: dimensions must be positive");
    }
    std::fill(params_.begin() + static_cast<std::ptrdiff_t>(2 * in_ * out_), params_.end(), 1.0);
}

nn::Matrix WaveletKanLayer::compute(const nn::Matrix& x, Cache* cache) const {
    if (x.cols() != in_) {
        throw InputError("WaveletKanLayer: input has " + std::to_string(x.cols()) +
                         " columns, expected " + std::to_string(in_));
    }
    const auto all = std::span(params_);
    const auto w = all.subspan(0, edges());
    const auto t = all.subspan(edges(), edges());
    const auto s = all.subspan(2 * edges(), edges());
    if (std::any_of(s.begin(), s.end(), [](double v) { return !(v >= kMinDilation); })) {
        throw InputError("WaveletKanLayer: dilation below minimum");
    }

    const std::size_t n_rows = x.rows();
    const std::size_t edges = in_ * out_;
    if (cache) {
        cache->rows = n_rows;
        cache->z.resize(n_rows * edges);
        cache->psi.resize(n_rows * edges);
        cache->dpsi.resize(n_rows * edges);
    }
    nn::Matrix out(n_rows, out_);
    for (std::size_t n = 0; n < n_rows; ++n) {
        const auto xr = x.row(n);
        for (std::size_t j = 0; j < out_; ++j) {
            double acc = 0.0;
            const std::size_t base = j * in_;
            for (std::size_t i = 0; i < in_; ++i) {
                const double z = (xr[i] - t[base + i]) / s[base + i];
                const WaveletSample ws = evaluate(mother_, z);
                acc += w[base + i] * ws.value;
                if (cache) {
                    const std::size_t c = n * edges + base + i;
                    cache->z[c] = z;
                    cache->psi[c] = ws.value;
                    cache->dpsi[c] = ws.derivative;
                }
            }
            out(n, j) = acc;
        }
    }
    return out;
}

nn::Matrix WaveletKanLayer::forward(const nn::Matrix& x) {
    nn::Matrix out = compute(x, &cache_);
    has_cache_ = true;
    return out;
}

nn::Matrix WaveletKanLayer::infer(const nn::Matrix& x) const {
    return compute(x, nullptr);
}

nn::Matrix WaveletKanLayer::backward(const nn::Matrix& grad_out) {
    if (!has_cache_) {
        throw StateError("WaveletKanLayer: backward called before forward");
    }
    if (grad_out.rows() != cache_.rows || grad_out.cols() != out_) {
        throw InputError("WaveletKanLayer: grad_out shape does not match last forward");
    }
    const auto w = std::span<const double>(params_).subspan(0, edges());
    const auto s = std::span<const double>(params_).subspan(2 * edges(), edges());
    std::fill(grads_.begin(), grads_.end(), 0.0);
    auto gw = std::span(grads_).subspan(0, in_ * out_);
    auto gt = std::span(grads_).subspan(in_ * out_, in_ * out_);
    auto gs = std::span(grads_).subspan(2 * in_ * out_, in_ * out_);

    const std::size_t edges = in_ * out_;
    nn::Matrix grad_x(cache_.rows, in_);
    for (std::size_t n = 0; n < cache_.rows; ++n) {
        auto gx = grad_x.row(n);
        for (std::size_t j = 0; j < out_; ++j) {
            const double g = grad_out(n, j);
            if (g == 0.0) continue;
            const std::size_t base = j * in_;
            for (std::size_t i = 0; i < in_; ++i) {
                const std::size_t e = base + i;
                const std::size_t c = n * edges + e;
                // d out / d x = w psi'(z) / s; t and s follow from dz/dt = -1/s, dz/ds = -z/s.
                const double dx = w[e] * cache_.dpsi[c] / s[e];
                gw[e] += g * cache_.psi[c];
                gt[e] -= g * dx;
                gs[e] -= g * dx * cache_.z[c];
                gx[i] += g * dx;
            }
        }
    }
    return grad_x;
}

void WaveletKanLayer::project_parameters() {
    for (double& v : dilations()) {
        v = std::max(v, kMinDilation);
    }
}

}  // namespace kanhsi::kan
