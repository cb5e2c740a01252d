#include "kanhsi/app/gradcheck_suite.hpp"

#include <algorithm>

#include "kanhsi/kan/dense_layer.hpp"
#include "kanhsi/kan/splinekan_layer.hpp"
#include "kanhsi/kan/wavkan_layer.hpp"
#include "kanhsi/nn/gradcheck.hpp"
#include "kanhsi/nn/init.hpp"
#include "kanhsi/nn/rng.hpp"

namespace kanhsi::app {

namespace {

nn::Matrix uniform_matrix(std::size_t rows, std::size_t cols, double lo, double hi, nn::Rng& rng) {
    nn::Matrix m(rows, cols);
    for (double& v : m.values()) v = rng.uniform(lo, hi);
    return m;
}

GradcheckFamily wavkan_family(kan::MotherWavelet mother) {
    return {"wavkan/" + kan::to_string(mother), [mother](std::uint64_t seed) {
                nn::Rng rng(seed);
                auto layer = std::make_unique<kan::WaveletKanLayer>(6, 4, mother);
                for (double& v : layer->weights()) v = rng.uniform(-1.0, 1.0);
                for (double& v : layer->translations()) v = rng.uniform(-1.0, 1.0);
                for (double& v : layer->dilations()) v = rng.uniform(0.5, 2.0);
                nn::Matrix x = uniform_matrix(8, 6, -2.0, 2.0, rng);
                return GradcheckInstance{std::move(layer), std::move(x), 1e-5};
            }};
}

GradcheckFamily dense_family(kan::Activation act) {
    return {"dense/" + kan::to_string(act), [act](std::uint64_t seed) {
                nn::Rng rng(seed);
                auto layer = std::make_unique<kan::DenseLayer>(6, 4, act);
                nn::fill_uniform(layer->parameters(), 1.0, rng);
                nn::Matrix x = uniform_matrix(8, 6, -2.0, 2.0, rng);
                return GradcheckInstance{std::move(layer), std::move(x), 1e-5};
            }};
}

}  // namespace

std::vector<GradcheckFamily> default_gradcheck_families() {
    std::vector<GradcheckFamily> f;
    for (auto m : {kan::MotherWavelet::MexicanHat, kan::MotherWavelet::Morlet, kan::MotherWavelet::DoG}) {
        f.push_back(wavkan_family(m));
    }
    f.push_back({"splinekan", [](std::uint64_t seed) {
                     nn::Rng rng(seed);
                     auto layer = std::make_unique<kan::SplineKanLayer>(6, 4);
                     nn::fill_uniform(layer->parameters(), 1.0, rng);
                     const auto& g = layer->grid();
                     const double margin = 0.05 * (g.hi - g.lo);
                     nn::Matrix x = uniform_matrix(8, 6, g.lo + margin, g.hi - margin, rng);
                     return GradcheckInstance{std::move(layer), std::move(x), 1e-6};
                 }});
    for (auto a : {kan::Activation::Identity, kan::Activation::ReLU, kan::Activation::SiLU}) {
        f.push_back(dense_family(a));
    }
    return f;
}

bool GradcheckSummary::passed() const {
    return std::all_of(families.begin(), families.end(), [](const FamilyResult& r) { return r.passed; });
}

GradcheckSummary run_gradcheck(const std::vector<GradcheckFamily>& families, std::uint64_t n_seeds,
                               double threshold) {
    GradcheckSummary summary;
    summary.threshold = threshold;
    for (const auto& fam : families) {
        FamilyResult r{fam.name, 0.0, 0, true};
        for (std::uint64_t seed = 0; seed < n_seeds; ++seed) {
            GradcheckInstance inst = fam.make(seed);
            const auto rep = nn::finite_diff_check(*inst.layer, inst.input, inst.eps);
            r.max_error = std::max(r.max_error, rep.max_error());
            ++r.instances;
        }
        r.passed = r.max_error < threshold;
        summary.families.push_back(r);
    }
    return summary;
}

}  // namespace kanhsi::app
