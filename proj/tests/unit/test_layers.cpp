#include <cmath>
#include <vector>

#include "doctest.h"
#include "kanhsi/errors.hpp"
#include "kanhsi/kan/dense_layer.hpp"
#include "kanhsi/kan/splinekan_layer.hpp"
#include "kanhsi/kan/wavkan_layer.hpp"
#include "kanhsi/nn/adam.hpp"
#include "kanhsi/nn/gradcheck.hpp"
#include "kanhsi/nn/init.hpp"
#include "kanhsi/nn/rng.hpp"

using namespace kanhsi;
using kan::MotherWavelet;
using nn::Matrix;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, double lo, double hi, nn::Rng& rng) {
    Matrix m(r, c);
    for (double& v : m.values()) v = rng.uniform(lo, hi);
    return m;
}

void randomize(kan::WaveletKanLayer& layer, nn::Rng& rng) {
    for (double& v : layer.weights()) v = rng.uniform(-1.0, 1.0);
    for (double& v : layer.translations()) v = rng.uniform(-1.0, 1.0);
    for (double& v : layer.dilations()) v = rng.uniform(0.5, 2.0);
}

}  // namespace

TEST_CASE("wavelet layer forward") {
    SUBCASE("zero weights give zero output") {
        kan::WaveletKanLayer layer(3, 2, MotherWavelet::Morlet);
        nn::Rng rng(1);
        const Matrix x = random_matrix(4, 3, -3, 3, rng);
        const Matrix y = layer.forward(x);
        for (double v : y.values()) CHECK(v == 0.0);
    }
    SUBCASE("single edge equals the mother wavelet") {
        kan::WaveletKanLayer layer(1, 1, MotherWavelet::MexicanHat);
        layer.weights()[0] = 1.0;
        const Matrix y = layer.forward(Matrix(1, 1, 0.0));
        CHECK(y(0, 0) == doctest::Approx(0.8673250705840775).epsilon(1e-15));
    }
    SUBCASE("output is linear in the weights") {
        nn::Rng rng(2);
        kan::WaveletKanLayer layer(5, 3, MotherWavelet::DoG);
        randomize(layer, rng);
        const Matrix x = random_matrix(6, 5, -2, 2, rng);
        const Matrix y1 = layer.infer(x);
        for (double& w : layer.weights()) w *= 2.0;
        const Matrix y2 = layer.infer(x);
        for (std::size_t i = 0; i < y1.size(); ++i) {
            CHECK(y2.values()[i] == 2.0 * y1.values()[i]);
        }
    }
    SUBCASE("translation covariance at unit dilation") {
        nn::Rng rng(3);
        for (MotherWavelet m : {MotherWavelet::MexicanHat, MotherWavelet::Morlet, MotherWavelet::DoG}) {
            kan::WaveletKanLayer layer(4, 3, m);
            randomize(layer, rng);
            for (double& s : layer.dilations()) s = 1.0;
            Matrix x = random_matrix(5, 4, -2, 2, rng);
            const Matrix y1 = layer.infer(x);
            const double delta = 0.37;
            for (double& v : x.values()) v += delta;
            for (double& t : layer.translations()) t += delta;
            const Matrix y2 = layer.infer(x);
            for (std::size_t i = 0; i < y1.size(); ++i) {
                CHECK(std::abs(y2.values()[i] - y1.values()[i]) < 1e-12);
            }
        }
    }
    SUBCASE("shape mismatch") {
        kan::WaveletKanLayer layer(3, 2, MotherWavelet::MexicanHat);
        CHECK_THROWS_AS(layer.forward(Matrix(2, 4)), InputError);
    }
}

TEST_CASE("wavelet layer backward") {
    nn::Rng rng(8);
    kan::WaveletKanLayer layer(3, 2, MotherWavelet::MexicanHat);
    CHECK_THROWS_AS(layer.backward(Matrix(1, 2)), StateError);
    randomize(layer, rng);
    const Matrix x = random_matrix(1, 3, -2, 2, rng);
    layer.forward(x);

    SUBCASE("zero upstream gradient") {
        const Matrix gx = layer.backward(Matrix(1, 2, 0.0));
        for (double v : gx.values()) CHECK(v == 0.0);
        for (double v : layer.gradients()) CHECK(v == 0.0);
    }
    SUBCASE("single-sample weight gradient is psi(z) times upstream") {
        const Matrix g(1, 2, {0.7, -1.3});
        layer.backward(g);
        for (std::size_t j = 0; j < 2; ++j) {
            for (std::size_t i = 0; i < 3; ++i) {
                const std::size_t e = j * 3 + i;
                const double z = (x(0, i) - layer.translations()[e]) / layer.dilations()[e];
                CHECK(layer.grad_weights()[e] ==
                      doctest::Approx(kan::mexican_hat(z).value * g(0, j)).epsilon(1e-14));
            }
        }
    }
    SUBCASE("shape mismatch") {
        CHECK_THROWS_AS(layer.backward(Matrix(2, 2)), InputError);
    }
}

TEST_CASE("wavelet layers pass the finite-difference check") {
    for (MotherWavelet m : {MotherWavelet::MexicanHat, MotherWavelet::Morlet, MotherWavelet::DoG}) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            CAPTURE(kan::to_string(m));
            CAPTURE(seed);
            nn::Rng rng(seed);
            kan::WaveletKanLayer layer(4, 3, m);
            randomize(layer, rng);
            const Matrix x = random_matrix(5, 4, -2, 2, rng);
            CHECK(nn::finite_diff_check(layer, x, 1e-5).max_error() < 1e-4);
        }
    }
}

TEST_CASE("dilation clamp after optimizer steps") {
    kan::WaveletKanLayer layer(2, 2, MotherWavelet::MexicanHat);
    for (double& w : layer.weights()) w = 1.0;
    for (double& s : layer.dilations()) s = 2e-3;
    nn::AdamState st(layer.parameters().size(), {0.5, 0.9, 0.999, 1e-8});
    // Constant positive gradient drives every dilation down.
    std::vector<double> grad(layer.parameters().size(), 1.0);
    for (int step = 0; step < 5; ++step) {
        nn::adam_step(layer.parameters(), grad, st);
        layer.project_parameters();
        for (double s : layer.dilations()) REQUIRE(s >= kan::WaveletKanLayer::kMinDilation);
    }
    CHECK(layer.dilations()[0] == kan::WaveletKanLayer::kMinDilation);
}

TEST_CASE("spline layer forward") {
    SUBCASE("zero parameters") {
        kan::SplineKanLayer layer(3, 2);
        nn::Rng rng(1);
        const Matrix y = layer.forward(random_matrix(4, 3, -3, 3, rng));
        for (double v : y.values()) CHECK(v == 0.0);
    }
    SUBCASE("silu base term vanishes at zero") {
        kan::SplineKanLayer layer(1, 1);
        layer.base_weights()[0] = 1.0;
        CHECK(layer.forward(Matrix(1, 1, 0.0))(0, 0) == 0.0);
        CHECK(layer.forward(Matrix(1, 1, 1.0))(0, 0) == doctest::Approx(kan::silu(1.0)));
    }
    SUBCASE("one-hot coefficients select a basis function") {
        kan::SplineKanLayer layer(1, 1);
        const std::size_t nb = layer.basis_size();
        for (std::size_t m = 0; m < nb; ++m) {
            std::fill(layer.coefficients().begin(), layer.coefficients().end(), 0.0);
            layer.coefficients()[m] = 1.0;
            for (double x = -2.5; x <= 2.5; x += 0.05) {
                const double y = layer.infer(Matrix(1, 1, x))(0, 0);
                REQUIRE(y == layer.basis().values(x)[m]);
            }
        }
    }
    SUBCASE("output is linear in the coefficients") {
        nn::Rng rng(12);
        kan::SplineKanLayer layer(3, 2);
        nn::fill_uniform(layer.coefficients(), 1.0, rng);
        const Matrix x = random_matrix(5, 3, -2, 2, rng);
        const Matrix y1 = layer.infer(x);
        for (double& c : layer.coefficients()) c *= -3.0;
        const Matrix y2 = layer.infer(x);
        for (std::size_t i = 0; i < y1.size(); ++i) {
            CHECK(y2.values()[i] == doctest::Approx(-3.0 * y1.values()[i]).epsilon(1e-14));
        }
    }
    SUBCASE("shape mismatch") {
        kan::SplineKanLayer layer(3, 2);
        CHECK_THROWS_AS(layer.forward(Matrix(2, 1)), InputError);
    }
}

TEST_CASE("spline layer backward") {
    nn::Rng rng(21);
    kan::SplineKanLayer layer(3, 2);
    CHECK_THROWS_AS(layer.backward(Matrix(1, 2)), StateError);
    nn::fill_uniform(layer.parameters(), 1.0, rng);
    const Matrix x = random_matrix(1, 3, -1.9, 1.9, rng);
    layer.forward(x);

    SUBCASE("zero upstream gradient") {
        const Matrix gx = layer.backward(Matrix(1, 2, 0.0));
        for (double v : gx.values()) CHECK(v == 0.0);
        for (double v : layer.gradients()) CHECK(v == 0.0);
    }
    SUBCASE("coefficient gradient is the basis value times upstream") {
        const Matrix g(1, 2, {1.5, -0.25});
        layer.backward(g);
        const std::size_t nb = layer.basis_size();
        for (std::size_t j = 0; j < 2; ++j) {
            for (std::size_t i = 0; i < 3; ++i) {
                const auto b = layer.basis().values(x(0, i));
                for (std::size_t m = 0; m < nb; ++m) {
                    CHECK(layer.grad_coefficients()[(j * 3 + i) * nb + m] ==
                          doctest::Approx(b[m] * g(0, j)).epsilon(1e-14));
                }
            }
        }
    }
    SUBCASE("clamped inputs only see the silu path") {
        kan::SplineKanLayer one(1, 1);
        one.base_weights()[0] = 0.5;
        std::fill(one.coefficients().begin(), one.coefficients().end(), 1.0);
        one.forward(Matrix(1, 1, 3.5));
        const Matrix gx = one.backward(Matrix(1, 1, 1.0));
        CHECK(gx(0, 0) == doctest::Approx(0.5 * kan::silu_derivative(3.5)));
    }
}

TEST_CASE("spline layers pass the finite-difference check") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CAPTURE(seed);
        nn::Rng rng(seed);
        kan::SplineKanLayer layer(4, 3);
        nn::fill_uniform(layer.parameters(), 1.0, rng);
        const Matrix x = random_matrix(5, 4, -1.9, 1.9, rng);
        CHECK(nn::finite_diff_check(layer, x, 1e-6).max_error() < 1e-4);
    }
}

TEST_CASE("dense layer") {
    SUBCASE("affine arithmetic") {
        kan::DenseLayer layer(1, 1, kan::Activation::Identity);
        layer.weights()[0] = 2.0;
        layer.bias()[0] = 1.0;
        CHECK(layer.forward(Matrix(1, 1, 3.0))(0, 0) == 7.0);
    }
    SUBCASE("zero weights and bias") {
        kan::DenseLayer layer(3, 3, kan::Activation::Identity);
        const Matrix y = layer.forward(Matrix(2, 3, 5.0));
        for (double v : y.values()) CHECK(v == 0.0);
    }
    SUBCASE("relu subgradient at zero is zero") {
        kan::DenseLayer layer(1, 1, kan::Activation::ReLU);
        layer.forward(Matrix(1, 1, 0.0));
        const Matrix gx = layer.backward(Matrix(1, 1, 1.0));
        CHECK(layer.gradients()[1] == 0.0);
        CHECK(gx(0, 0) == 0.0);
    }
    SUBCASE("shape mismatch and state") {
        kan::DenseLayer layer(2, 2, kan::Activation::SiLU);
        CHECK_THROWS_AS(layer.backward(Matrix(1, 2)), StateError);
        CHECK_THROWS_AS(layer.forward(Matrix(1, 3)), InputError);
    }
    SUBCASE("finite-difference check") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            for (auto act : {kan::Activation::Identity, kan::Activation::ReLU, kan::Activation::SiLU}) {
                CAPTURE(seed);
                CAPTURE(kan::to_string(act));
                nn::Rng rng(seed);
                kan::DenseLayer layer(5, 4, act);
                nn::fill_uniform(layer.parameters(), 1.0, rng);
                const Matrix x = random_matrix(3, 5, -2, 2, rng);
                const double err = nn::finite_diff_check(layer, x, 1e-5).max_error();
                CHECK(err < (act == kan::Activation::Identity ? 1e-7 : 1e-4));
            }
        }
    }
}

TEST_CASE("infer equals forward for every layer type") {
    nn::Rng rng(31);
    const Matrix x = random_matrix(7, 4, -2.5, 2.5, rng);
    kan::WaveletKanLayer w(4, 3, MotherWavelet::Morlet);
    randomize(w, rng);
    kan::SplineKanLayer s(4, 3);
    nn::fill_uniform(s.parameters(), 1.0, rng);
    kan::DenseLayer d(4, 3, kan::Activation::SiLU);
    nn::fill_uniform(d.parameters(), 1.0, rng);
    CHECK(w.infer(x) == w.forward(x));
    CHECK(s.infer(x) == s.forward(x));
    CHECK(d.infer(x) == d.forward(x));
}
