#include <cmath>

#include "doctest.h"
#include "kanhsi/errors.hpp"
#include "kanhsi/kan/wavelets.hpp"
#include "kanhsi/nn/rng.hpp"

using namespace kanhsi;
using kan::MotherWavelet;

namespace {

double central_diff(MotherWavelet m, double z) {
    const double h = 1e-5;
    return (kan::evaluate(m, z + h).value - kan::evaluate(m, z - h).value) / (2 * h);
}

}  // namespace

TEST_CASE("mexican hat") {
    CHECK(kan::mexican_hat(1.0).value == 0.0);
    CHECK(kan::mexican_hat(-1.0).value == 0.0);
    // 2 / (sqrt(3) pi^(1/4)) to 40 digits via mpmath.
    CHECK(kan::mexican_hat(0.0).value == doctest::Approx(0.8673250705840775).epsilon(1e-15));
    CHECK(kan::mexican_hat(0.0).derivative == 0.0);
}

TEST_CASE("morlet") {
    CHECK(kan::morlet(0.0).value == 1.0);
    CHECK(std::abs(kan::morlet(20.0).value) < 1e-80);
    CHECK(std::abs(kan::morlet(-20.0).value) < 1e-80);
}

TEST_CASE("derivative of gaussian") {
    CHECK(kan::dog(0.0).value == 0.0);
    CHECK(kan::dog(-1.0).value == doctest::Approx(0.6065306597126334).epsilon(1e-15));
    CHECK(kan::dog(1.0).value == doctest::Approx(-0.6065306597126334).epsilon(1e-15));
    CHECK(std::abs(kan::dog(1.0).derivative) < 1e-16);  // extremum
}

TEST_CASE("analytic derivatives match central differences") {
    nn::Rng rng(17);
    for (MotherWavelet m : {MotherWavelet::MexicanHat, MotherWavelet::Morlet, MotherWavelet::DoG}) {
        CAPTURE(kan::to_string(m));
        for (int i = 0; i < 10; ++i) {
            const double z = rng.uniform(-3.0, 3.0);
            CAPTURE(z);
            CHECK(std::abs(kan::evaluate(m, z).derivative - central_diff(m, z)) < 1e-8);
        }
    }
}

TEST_CASE("wavelet names round-trip") {
    for (MotherWavelet m : {MotherWavelet::MexicanHat, MotherWavelet::Morlet, MotherWavelet::DoG}) {
        CHECK(kan::parse_mother_wavelet(kan::to_string(m)) == m);
    }
    CHECK_THROWS_AS(kan::parse_mother_wavelet("haar"), InputError);
}
