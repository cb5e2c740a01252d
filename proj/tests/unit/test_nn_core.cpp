#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "kanhsi/errors.hpp"
#include "kanhsi/kan/dense_layer.hpp"
#include "kanhsi/nn/adam.hpp"
#include "kanhsi/nn/gradcheck.hpp"
#include "kanhsi/nn/init.hpp"
#include "kanhsi/nn/loss.hpp"
#include "kanhsi/nn/rng.hpp"

using namespace kanhsi;
using nn::Matrix;

TEST_CASE("rng reproduces the reference xoshiro256** stream") {
    // Reference values from an independent Python transcription of
    // SplitMix64 seeding + xoshiro256**.
    nn::Rng rng(42);
    CHECK(rng.next_u64() == 0x15780b2e0c2ec716ULL);
    CHECK(rng.next_u64() == 0x6104d9866d113a7eULL);
    CHECK(rng.next_u64() == 0xae17533239e499a1ULL);
}

TEST_CASE("rng derived draws stay in range") {
    nn::Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        REQUIRE(rng.below(13) < 13);
        REQUIRE(std::isfinite(rng.normal()));
    }
    std::vector<int> items(50);
    std::iota(items.begin(), items.end(), 0);
    rng.shuffle(std::span(items));
    std::vector<int> sorted = items;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 50; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("softmax cross-entropy on hand cases") {
    SUBCASE("uniform logits give ln C") {
        const Matrix logits(1, 4, 0.0);
        const std::vector<std::size_t> labels{2};
        const auto r = nn::softmax_cross_entropy(logits, labels);
        CHECK(r.loss == doctest::Approx(1.3862943611198906).epsilon(1e-14));
    }
    SUBCASE("saturated correct class") {
        const Matrix logits(1, 3, {1000.0, 0.0, 0.0});
        const std::vector<std::size_t> labels{0};
        const auto r = nn::softmax_cross_entropy(logits, labels);
        CHECK(r.loss == doctest::Approx(0.0));
        CHECK(std::abs(r.grad(0, 0)) < 1e-300);
        CHECK(r.grad.all_finite());
    }
    SUBCASE("two logits, both labels") {
        // Frozen from a 40-digit mpmath evaluation of -log softmax.
        const Matrix logits(1, 2, {1.0, 2.0});
        const std::vector<std::size_t> l0{0};
        const auto r0 = nn::softmax_cross_entropy(logits, l0);
        CHECK(r0.loss == doctest::Approx(1.3132616875182228).epsilon(1e-14));
        CHECK(r0.grad(0, 0) == doctest::Approx(-0.7310585786300049).epsilon(1e-14));
        CHECK(r0.grad(0, 1) == doctest::Approx(0.7310585786300049).epsilon(1e-14));

        const std::vector<std::size_t> l1{1};
        const auto r1 = nn::softmax_cross_entropy(logits, l1);
        CHECK(r1.loss == doctest::Approx(0.3132616875182228).epsilon(1e-14));
        CHECK(r1.grad(0, 0) == doctest::Approx(0.2689414213699951).epsilon(1e-14));
    }
    SUBCASE("errors") {
        const Matrix logits(2, 3, 0.0);
        const std::vector<std::size_t> bad{0, 3};
        CHECK_THROWS_AS(nn::softmax_cross_entropy(logits, bad), InputError);
        Matrix nan_logits(1, 2, 0.0);
        nan_logits(0, 1) = std::nan("");
        const std::vector<std::size_t> ok{0};
        CHECK_THROWS_AS(nn::softmax_cross_entropy(nan_logits, ok), NumericError);
    }
}

TEST_CASE("softmax rows sum to one and CE gradient rows sum to zero") {
    nn::Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng.below(16);
        const std::size_t c = 2 + rng.below(10);
        Matrix logits(n, c);
        for (double& v : logits.values()) v = rng.uniform(-30.0, 30.0);
        std::vector<std::size_t> labels(n);
        for (auto& l : labels) l = rng.below(c);

        const Matrix p = nn::softmax(logits);
        const auto r = nn::softmax_cross_entropy(logits, labels);
        for (std::size_t row = 0; row < n; ++row) {
            double ps = 0.0;
            double gs = 0.0;
            for (std::size_t k = 0; k < c; ++k) {
                ps += p(row, k);
                gs += r.grad(row, k);
            }
            CHECK(std::abs(ps - 1.0) < 1e-12);
            CHECK(std::abs(gs) < 1e-10);
        }
    }
}

TEST_CASE("adam step") {
    SUBCASE("first step moves by about lr") {
        for (double g : {3.0, -0.5, 1e-3}) {
            std::vector<double> p{1.0};
            const std::vector<double> grad{g};
            nn::AdamState st(1, {0.01, 0.9, 0.999, 1e-8});
            nn::adam_step(p, grad, st);
            CHECK(std::abs(std::abs(p[0] - 1.0) - 0.01) < 1e-6);
            CHECK((p[0] - 1.0) * g < 0.0);
            CHECK(st.step == 1);
        }
    }
    SUBCASE("zero gradient leaves params") {
        std::vector<double> p{0.25, -4.0};
        const std::vector<double> grad{0.0, 0.0};
        nn::AdamState st(2);
        nn::adam_step(p, grad, st);
        CHECK(p[0] == 0.25);
        CHECK(p[1] == -4.0);
    }
    SUBCASE("hand-evaluated update") {
        // m_hat = 2, v_hat = 4, delta = -0.1 * 2 / (2 + 1e-8)
        std::vector<double> p{0.0};
        const std::vector<double> grad{2.0};
        nn::AdamState st(1, {0.1, 0.9, 0.999, 1e-8});
        nn::adam_step(p, grad, st);
        CHECK(p[0] == doctest::Approx(-0.0999999995).epsilon(1e-12));
        CHECK(st.v[0] >= 0.0);
    }
    SUBCASE("length mismatch") {
        std::vector<double> p{0.0, 1.0};
        const std::vector<double> grad{2.0};
        nn::AdamState st(2);
        CHECK_THROWS_AS(nn::adam_step(p, grad, st), InputError);
    }
}

TEST_CASE("glorot init") {
    SUBCASE("determinism") {
        nn::Rng a(11);
        nn::Rng b(11);
        std::vector<double> va(500);
        std::vector<double> vb(500);
        nn::fill_glorot(va, 20, 5, a);
        nn::fill_glorot(vb, 20, 5, b);
        CHECK(va == vb);
    }
    SUBCASE("bound for 3x3") {
        CHECK(nn::glorot_bound(3, 3) == 1.0);
        nn::Rng rng(1);
        std::vector<double> v(10000);
        nn::fill_glorot(v, 3, 3, rng);
        for (double x : v) REQUIRE(std::abs(x) <= 1.0);
    }
    SUBCASE("monte-carlo mean") {
        nn::Rng rng(2024);
        std::vector<double> v(100000);
        nn::fill_glorot(v, 3, 3, rng);
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        CHECK(std::abs(mean) < 0.01);
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        var /= static_cast<double>(v.size());
        CHECK(var == doctest::Approx(1.0 / 3.0).epsilon(0.02));  // U(-1,1)
    }
}

namespace {

// Dense layer whose backward reports a gradient that is off by 1%.
class CorruptedDense final : public nn::Layer {
public:
    CorruptedDense() : inner_(3, 2, kan::Activation::Identity) {}
    std::string kind() const override { return "corrupted"; }
    std::size_t in_dim() const override { return 3; }
    std::size_t out_dim() const override { return 2; }
    Matrix forward(const Matrix& x) override { return inner_.forward(x); }
    Matrix backward(const Matrix& g) override {
        Matrix gx = inner_.backward(g);
        grads_.assign(inner_.gradients().begin(), inner_.gradients().end());
        grads_[0] *= 1.01;
        return gx;
    }
    Matrix infer(const Matrix& x) const override { return inner_.infer(x); }
    std::span<double> parameters() override { return inner_.parameters(); }
    std::span<const double> parameters() const override { return inner_.parameters(); }
    std::span<const double> gradients() const override { return grads_; }

    kan::DenseLayer inner_;
    std::vector<double> grads_;
};

}  // namespace

TEST_CASE("finite difference check") {
    nn::Rng rng(5);
    Matrix x(4, 3);
    for (double& v : x.values()) v = rng.uniform(-1.0, 1.0);

    SUBCASE("linear dense layer is near exact") {
        kan::DenseLayer layer(3, 2, kan::Activation::Identity);
        nn::fill_uniform(layer.parameters(), 1.0, rng);
        const auto before = std::vector<double>(layer.parameters().begin(), layer.parameters().end());
        const auto rep = nn::finite_diff_check(layer, x, 1e-5);
        CHECK(rep.max_error() < 1e-7);
        CHECK(rep.n_checked == layer.parameters().size() + x.size());
        CHECK(std::equal(before.begin(), before.end(), layer.parameters().begin()));
    }
    SUBCASE("corrupted backward is caught") {
        CorruptedDense layer;
        nn::fill_uniform(layer.parameters(), 1.0, rng);
        const auto rep = nn::finite_diff_check(layer, x, 1e-5);
        CHECK(rep.max_error() > 1e-3);
    }
    SUBCASE("eps range") {
        kan::DenseLayer layer(3, 2, kan::Activation::Identity);
        CHECK_THROWS_AS(nn::finite_diff_check(layer, x, 0.0), InputError);
        CHECK_THROWS_AS(nn::finite_diff_check(layer, x, 0.1), InputError);
    }
}

TEST_CASE("relative error floor") {
    CHECK(nn::relative_error(1.0, 1.0) == 0.0);
    CHECK(nn::relative_error(2.0, 1.0) == doctest::Approx(0.5));
    CHECK(nn::relative_error(1e-9, 0.0) == doctest::Approx(1e-6));
}
