#include <cmath>
#include <vector>

#include "doctest.h"
#include "kanhsi/errors.hpp"
#include "kanhsi/kan/bspline.hpp"
#include "kanhsi/nn/rng.hpp"

using namespace kanhsi;
using kan::BSplineBasis;

namespace {

// Textbook recursive Cox-de Boor in long double, 0/0 := 0. Independent of
// the iterative triangular scheme under test.
long double cox_de_boor(const std::vector<double>& t, std::size_t m, int k, long double x) {
    if (k == 1) {
        return (t[m] <= x && x < t[m + 1]) ? 1.0L : 0.0L;
    }
    long double a = 0.0L;
    long double b = 0.0L;
    const long double d1 = static_cast<long double>(t[m + k - 1]) - t[m];
    const long double d2 = static_cast<long double>(t[m + k]) - t[m + 1];
    if (d1 != 0.0L) a = (x - t[m]) / d1 * cox_de_boor(t, m, k - 1, x);
    if (d2 != 0.0L) b = (t[m + k] - x) / d2 * cox_de_boor(t, m + 1, k - 1, x);
    return a + b;
}

}  // namespace

TEST_CASE("quadratic basis on integer knots at 2.5") {
    const std::vector<double> knots{0, 1, 2, 3, 4, 5};
    const BSplineBasis basis(knots, 3);
    REQUIRE(basis.size() == 3);
    const auto v = basis.values(2.5);
    for (std::size_t m = 0; m < 3; ++m) {
        const auto expected = static_cast<double>(cox_de_boor(knots, m, 3, 2.5L));
        CHECK(v[m] == doctest::Approx(expected).epsilon(1e-15));
    }
    // Closed form of the uniform quadratic pieces.
    CHECK(v[0] == doctest::Approx(0.125));
    CHECK(v[1] == doctest::Approx(0.75));
    CHECK(v[2] == doctest::Approx(0.125));
}

TEST_CASE("order-1 basis is the interval indicator") {
    const auto basis = BSplineBasis::uniform(8, 1, -2.0, 2.0);
    REQUIRE(basis.size() == 8);
    for (std::size_t m = 0; m < 8; ++m) {
        const double x = -2.0 + 0.5 * static_cast<double>(m) + 0.2;
        const auto v = basis.values(x);
        for (std::size_t q = 0; q < 8; ++q) {
            CHECK(v[q] == (q == m ? 1.0 : 0.0));
        }
    }
}

TEST_CASE("uniform grids match the recursive oracle and sum to one") {
    nn::Rng rng(99);
    for (int k = 1; k <= 4; ++k) {
        CAPTURE(k);
        const auto basis = BSplineBasis::uniform(8, k, -2.0, 2.0);
        const std::vector<double> knots(basis.knots().begin(), basis.knots().end());
        CHECK(basis.size() == 8 + static_cast<std::size_t>(k) - 1);
        CHECK(basis.domain_lo() == -2.0);
        CHECK(basis.domain_hi() == 2.0);
        for (int s = 0; s < 200; ++s) {
            const double x = rng.uniform(-2.0, 2.0);
            const auto v = basis.values(x);
            double sum = 0.0;
            for (std::size_t m = 0; m < v.size(); ++m) {
                sum += v[m];
                const auto expected = static_cast<double>(cox_de_boor(knots, m, k, x));
                REQUIRE(std::abs(v[m] - expected) < 1e-14);
            }
            REQUIRE(std::abs(sum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("derivatives match central differences inside the grid") {
    nn::Rng rng(4);
    for (int k = 2; k <= 4; ++k) {
        const auto basis = BSplineBasis::uniform(6, k, -1.5, 2.5);
        for (int s = 0; s < 50; ++s) {
            const double x = rng.uniform(-1.4, 2.4);
            const double h = 1e-6;
            const auto d = basis.derivatives(x);
            const auto vp = basis.values(x + h);
            const auto vm = basis.values(x - h);
            for (std::size_t m = 0; m < d.size(); ++m) {
                // Linear pieces (k = 2) have derivative jumps at knots.
                if (k == 2) {
                    const double u = (x + 1.5) / (4.0 / 6.0);
                    if (std::abs(u - std::round(u)) < 1e-4) continue;
                }
                REQUIRE(d[m] == doctest::Approx((vp[m] - vm[m]) / (2 * h)).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("out-of-grid inputs are clamped") {
    const auto basis = BSplineBasis::uniform(8, 3, -2.0, 2.0);
    CHECK(basis.values(-7.0) == basis.values(-2.0));
    CHECK(basis.values(9.0) == basis.values(2.0));
    for (double d : basis.derivatives(9.0)) CHECK(d == 0.0);
    for (double d : basis.derivatives(-3.0)) CHECK(d == 0.0);
    double sum = 0.0;
    for (double v : basis.values(2.0)) sum += v;
    CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("invalid knot vectors") {
    CHECK_THROWS_AS(BSplineBasis({0, 2, 1, 3}, 1), InputError);
    CHECK_THROWS_AS(BSplineBasis({0, 1}, 2), InputError);
    CHECK_THROWS_AS(BSplineBasis({0, 1, 2}, 0), InputError);
}
