#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kanhsi::kan {

/// B-spline basis over an explicit knot vector.
///
/// `order` is the number of coefficients per polynomial piece (degree
/// order - 1). A knot vector of length K yields K - order basis functions
/// B_0 .. B_{K-order-1}. They form a partition of unity on the valid domain
/// [knots[order - 1], knots[K - order]]; inputs outside it are clamped.
class BSplineBasis {
public:
    BSplineBasis(std::vector<double> knots, int order);

    /// G uniform intervals over [lo, hi], extended by order - 1 knots on each
    /// side so the valid domain is exactly [lo, hi]. Gives G + order - 1
    /// basis functions.
    static BSplineBasis uniform(std::size_t intervals, int order, double lo, double hi);

    int order() const noexcept { return order_; }
    std::size_t size() const noexcept { return knots_.size() - static_cast<std::size_t>(order_); }
    std::span<const double> knots() const noexcept { return knots_; }
    double domain_lo() const noexcept { return knots_[static_cast<std::size_t>(order_ - 1)]; }
    double domain_hi() const noexcept { return knots_[size()]; }

    /// Writes size() basis values (and derivatives when non-empty) for x.
    /// Returns true if x was clamped into the domain, in which case the
    /// derivatives are all zero. `scratch` must hold knots().size() values.
    bool evaluate(double x, std::span<double> values, std::span<double> derivatives,
                  std::span<double> scratch) const;

    std::vector<double> values(double x) const;
    std::vector<double> derivatives(double x) const;

private:
    std::vector<double> knots_;
    int order_;
};

}  // namespace kanhsi::kan
