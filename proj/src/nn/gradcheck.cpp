#include "kanhsi/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kanhsi/errors.hpp"

namespace kanhsi::nn {

namespace {

double probe(Layer& layer, const Matrix& x) {
    const Matrix y = layer.forward(x);
    double sum = 0.0;
    for (double v : y.values()) {
        sum += v;
    }
    if (!std::isfinite(sum)) {
        throw NumericError("finite_diff_check: non-finite probe loss");
    }
    return sum;
}

}  // namespace

double relative_error(double analytic, double numeric, double floor) {
    const double scale = std::max({std::abs(analytic), std::abs(numeric), floor});
    return std::abs(analytic - numeric) / scale;
}

GradCheckReport finite_diff_check(Layer& layer, const Matrix& x, double eps) {
    if (!(eps > 0.0 && eps <= 1e-2)) {
        throw InputError("finite_diff_check: eps must lie in (0, 1e-2]");
    }
    require_finite(x, "finite_diff_check");

    const Matrix y = layer.forward(x);
    require_finite(y, "finite_diff_check forward");
    const Matrix grad_x = layer.backward(Matrix(y.rows(), y.cols(), 1.0));
    require_finite(grad_x, "finite_diff_check backward");
    const std::vector<double> analytic(layer.gradients().begin(), layer.gradients().end());

    GradCheckReport report;
    auto params = layer.parameters();
    for (std::size_t p = 0; p < params.size(); ++p) {
        const double saved = params[p];
        params[p] = saved + eps;
        const double plus = probe(layer, x);
        params[p] = saved - eps;
        const double minus = probe(layer, x);
        params[p] = saved;
        const double numeric = (plus - minus) / (2.0 * eps);
        report.max_param_error =
            std::max(report.max_param_error, relative_error(analytic[p], numeric));
        ++report.n_checked;
    }

    Matrix xp = x;
    for (std::size_t i = 0; i < xp.size(); ++i) {
        auto v = xp.values();
        const double saved = v[i];
        v[i] = saved + eps;
        const double plus = probe(layer, xp);
        v[i] = saved - eps;
        const double minus = probe(layer, xp);
        v[i] = saved;
        const double numeric = (plus - minus) / (2.0 * eps);
        report.max_input_error =
            std::max(report.max_input_error, relative_error(grad_x.values()[i], numeric));
        ++report.n_checked;
    }
    return report;
}

}  // namespace kanhsi::nn
