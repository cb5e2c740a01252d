#include "kanhsi/kan/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kanhsi/errors.hpp"

namespace kanhsi::kan {

namespace {

// a / b with 0/0 (and anything over a zero-width span) taken as 0.
inline double ratio(double a, double b) noexcept {
    return b == 0.0 ? 0.0 : a / b;
}

}  // namespace

BSplineBasis::BSplineBasis(std::vector<double> knots, int order)
    : knots_(std::move(knots)), order_(order) {
    if (order_ < 1) {
        throw InputError("BSplineBasis: order must be >= 1");
    }
    if (knots_.size() < static_cast<std::size_t>(order_) + 1) {
        throw InputError("BSplineBasis: need at least order + 1 knots, got " +
                         std::to_string(knots_.size()));
    }
    for (std::size_t m = 0; m < knots_.size(); ++m) {
        if (!std::isfinite(knots_[m])) {
            throw InputError("BSplineBasis: non-finite knot");
        }
        if (m > 0 && knots_[m] < knots_[m - 1]) {
            throw InputError("BSplineBasis: knots decrease at index " + std::to_string(m));
        }
    }
    if (!(domain_lo() < domain_hi())) {
        throw InputError("BSplineBasis: empty valid domain");
    }
}

BSplineBasis BSplineBasis::uniform(std::size_t intervals, int order, double lo, double hi) {
    if (intervals == 0 || order < 1 || !(lo < hi)) {
        throw InputError("BSplineBasis::uniform: need intervals >= 1, order >= 1, lo < hi");
    }
    const double h = (hi - lo) / static_cast<double>(intervals);
    const auto ext = static_cast<std::ptrdiff_t>(order - 1);
    const auto n_knots = intervals + 1 + 2 * static_cast<std::size_t>(ext);
    std::vector<double> knots(n_knots);
    for (std::size_t m = 0; m < n_knots; ++m) {
        knots[m] = lo + static_cast<double>(static_cast<std::ptrdiff_t>(m) - ext) * h;
    }
    // Pin the domain ends so clamping lands exactly on lo / hi.
    knots[static_cast<std::size_t>(ext)] = lo;
    knots[static_cast<std::size_t>(ext) + intervals] = hi;
    return BSplineBasis(std::move(knots), order);
}

bool BSplineBasis::evaluate(double x, std::span<double> values, std::span<double> derivatives,
                            std::span<double> scratch) const {
    const std::size_t n_basis = size();
    const std::size_t k = static_cast<std::size_t>(order_);
    const std::size_t n_knots = knots_.size();

    const double lo = domain_lo();
    const double hi = domain_hi();
    const bool clamped = !(x >= lo && x <= hi);  // also catches NaN
    if (!(x >= lo)) x = lo;
    if (x > hi) x = hi;

    // Active interval mu with t_mu <= x < t_mu+1. At the right end use the
    // last non-empty interval inside the domain.
    std::size_t mu;
    if (x >= hi) {
        mu = n_basis - 1;
        while (knots_[mu] == knots_[mu + 1]) --mu;
    } else {
        const auto it = std::upper_bound(knots_.begin() + static_cast<std::ptrdiff_t>(k - 1),
                                         knots_.begin() + static_cast<std::ptrdiff_t>(n_basis + 1),
                                         x);
        mu = static_cast<std::size_t>(it - knots_.begin()) - 1;
    }

    // scratch[m] holds B_{m,q}(x) for the current order q, m < n_knots - q.
    std::fill(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(n_knots - 1), 0.0);
    scratch[mu] = 1.0;
    for (std::size_t q = 2; q <= k; ++q) {
        if (q == k && !derivatives.empty()) {
            for (std::size_t m = 0; m < n_basis; ++m) {
                const double left = ratio(scratch[m], knots_[m + k - 1] - knots_[m]);
                const double right = ratio(scratch[m + 1], knots_[m + k] - knots_[m + 1]);
                derivatives[m] = clamped ? 0.0 : static_cast<double>(k - 1) * (left - right);
            }
        }
        for (std::size_t m = 0; m + q < n_knots; ++m) {
            const double left = ratio(x - knots_[m], knots_[m + q - 1] - knots_[m]) * scratch[m];
            const double right =
                ratio(knots_[m + q] - x, knots_[m + q] - knots_[m + 1]) * scratch[m + 1];
            scratch[m] = left + right;
        }
    }
    if (k == 1 && !derivatives.empty()) {
        std::fill(derivatives.begin(), derivatives.begin() + static_cast<std::ptrdiff_t>(n_basis), 0.0);
    }
    std::copy(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(n_basis), values.begin());
    return clamped;
}

std::vector<double> BSplineBasis::values(double x) const {
    std::vector<double> out(size());
    std::vector<double> scratch(knots_.size());
    evaluate(x, out, {}, scratch);
    return out;
}

std::vector<double> BSplineBasis::derivatives(double x) const {
    std::vector<double> vals(size());
    std::vector<double> out(size());
    std::vector<double> scratch(knots_.size());
    evaluate(x, vals, out, scratch);
    return out;
}

}  // namespace kanhsi::kan
