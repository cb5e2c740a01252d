#include "kanhsi/app/pipeline.hpp"

#include <cmath>
#include <numeric>

#include "kanhsi/errors.hpp"
#include "kanhsi/nn/adam.hpp"
#include "kanhsi/nn/loss.hpp"
#include "kanhsi/nn/rng.hpp"

namespace kanhsi::app {

using nlohmann::json;

double round4(double v) {
    return std::round(v * 1e4) / 1e4;
}

json to_json(const MetricsReport& r) {
    json per_class = json::array();
    for (double v : r.per_class) {
        per_class.push_back(std::isnan(v) ? json(nullptr) : json(v));
    }
    json confusion = json::array();
    for (std::size_t t = 0; t < r.confusion.n_classes(); ++t) {
        json row = json::array();
        for (std::size_t p = 0; p < r.confusion.n_classes(); ++p) row.push_back(r.confusion.count(t, p));
        confusion.push_back(row);
    }
    return {{"dataset", r.dataset},
            {"model", r.model},
            {"oa", round4(r.oa)},
            {"kappa", round4(r.kappa)},
            {"oa_exact", r.oa},
            {"kappa_exact", r.kappa},
            {"per_class", per_class},
            {"n_train", r.n_train},
            {"n_test", r.n_test},
            {"seed", r.seed},
            {"config_hash", r.config_hash},
            {"confusion", confusion}};
}

MetricsReport metrics_from_json(const json& j) {
    MetricsReport r;
    r.dataset = j.at("dataset").get<std::string>();
    r.model = j.at("model").get<std::string>();
    r.oa = j.at("oa_exact").get<double>();
    r.kappa = j.at("kappa_exact").get<double>();
    for (const auto& v : j.at("per_class")) {
        r.per_class.push_back(v.is_null() ? std::nan("") : v.get<double>());
    }
    r.n_train = j.at("n_train").get<std::size_t>();
    r.n_test = j.at("n_test").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config_hash = j.at("config_hash").get<std::string>();
    const auto& cm = j.at("confusion");
    r.confusion = metrics::ConfusionMatrix(cm.size());
    for (std::size_t t = 0; t < cm.size(); ++t) {
        for (std::size_t p = 0; p < cm.size(); ++p) {
            const auto n = cm.at(t).at(p).get<std::uint64_t>();
            for (std::uint64_t k = 0; k < n; ++k) r.confusion.accumulate(t, p);
        }
    }
    return r;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // One SplitMix64 output of seed + stream * golden gamma.
    std::uint64_t z = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

PreparedData prepare(const hsi::HsiDataset& dataset, double fraction, std::uint64_t seed) {
    PreparedData d;
    d.split = hsi::stratified_split(dataset.gt, fraction, seed);
    if (d.split.train.empty()) {
        throw InputError("dataset '" + dataset.manifest.dataset + "' has no labeled pixels");
    }
    d.stats = hsi::compute_band_stats(dataset.cube, d.split.train);
    d.train = hsi::extract_spectra(dataset.cube, dataset.gt, d.split.train);
    d.test = hsi::extract_spectra(dataset.cube, dataset.gt, d.split.test);
    hsi::standardize(d.train.x, d.stats);
    hsi::standardize(d.test.x, d.stats);
    return d;
}

void check_compatible(const kan::ModelSpec& spec, const hsi::HsiDataset& dataset) {
    if (spec.input_dim() != dataset.cube.bands) {
        throw InputError("model expects " + std::to_string(spec.input_dim()) + " bands but dataset '" +
                         dataset.manifest.dataset + "' has " + std::to_string(dataset.cube.bands));
    }
    if (spec.output_dim() != dataset.gt.n_classes()) {
        throw InputError("model predicts " + std::to_string(spec.output_dim()) + " classes but dataset '" +
                         dataset.manifest.dataset + "' has " + std::to_string(dataset.gt.n_classes()));
    }
}

double mean_loss(const kan::Model& model, const hsi::LabeledSpectra& data, unsigned threads) {
    if (data.labels.empty()) return 0.0;
    return nn::softmax_cross_entropy(model.infer(data.x, threads), data.labels).loss;
}

metrics::ConfusionMatrix confusion_of(const kan::Model& model, const hsi::LabeledSpectra& data,
                                      std::size_t n_classes, unsigned threads) {
    metrics::ConfusionMatrix cm(n_classes);
    if (data.labels.empty()) return cm;
    cm.accumulate(data.labels, kan::argmax_rows(model.infer(data.x, threads)));
    return cm;
}

MetricsReport evaluate(const kan::Model& model, const PreparedData& data,
                       const hsi::HsiDataset& dataset, const TrainConfig& config, unsigned threads) {
    check_compatible(model.spec(), dataset);
    MetricsReport r;
    r.dataset = dataset.manifest.dataset;
    r.model = kan::to_string(model.spec().family);
    r.confusion = confusion_of(model, data.test, dataset.gt.n_classes(), threads);
    r.oa = metrics::overall_accuracy(r.confusion);
    r.kappa = metrics::kappa(r.confusion);
    r.per_class = metrics::per_class_accuracy(r.confusion);
    r.n_train = data.split.train.size();
    r.n_test = data.split.test.size();
    r.seed = data.split.seed;
    r.config_hash = config_hash(config);
    return r;
}

TrainResult train(const TrainConfig& config, const hsi::HsiDataset& dataset,
                  const EpochCallback& on_epoch, unsigned threads) {
    config.validate();
    PreparedData data = prepare(dataset, config.fraction, config.seed);
    const auto hidden = config.hidden_widths();
    kan::ModelSpec spec = kan::make_model_spec(config.model, dataset.cube.bands, hidden,
                                               dataset.gt.n_classes(), config.architecture());
    nn::Rng init_rng(derive_seed(config.seed, kInitStream));
    TrainResult result{kan::Model(std::move(spec), init_rng), std::move(data), {}, {}};
    kan::Model& model = result.model;
    const PreparedData& d = result.data;

    std::vector<nn::AdamState> adam;
    for (const auto& layer : model.layers()) {
        adam.emplace_back(layer->parameters().size(),
                          nn::AdamConfig{config.learning_rate, 0.9, 0.999, 1e-8});
    }

    auto log = [&](EpochLog e) {
        result.history.push_back(e);
        if (on_epoch) on_epoch(e);
    };
    log({0, mean_loss(model, d.train, threads), std::nullopt});

    nn::Rng shuffle_rng(derive_seed(config.seed, kShuffleStream));
    const std::size_t n = d.train.labels.size();
    const std::size_t bands = d.train.x.cols();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> batch_labels;

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        shuffle_rng.shuffle(std::span(order));
        double loss_sum = 0.0;
        for (std::size_t begin = 0; begin < n; begin += config.batch_size) {
            const std::size_t end = std::min(n, begin + config.batch_size);
            nn::Matrix xb(end - begin, bands);
            batch_labels.resize(end - begin);
            for (std::size_t r = begin; r < end; ++r) {
                const auto src = d.train.x.row(order[r]);
                std::copy(src.begin(), src.end(), xb.row(r - begin).begin());
                batch_labels[r - begin] = d.train.labels[order[r]];
            }
            const nn::Matrix logits = model.forward(xb);
            if (!logits.all_finite()) {
                throw NumericError("training diverged: non-finite logits at epoch " +
                                   std::to_string(epoch) + ", batch starting at " + std::to_string(begin));
            }
            const nn::LossResult loss = nn::softmax_cross_entropy(logits, batch_labels);
            if (!std::isfinite(loss.loss)) {
                throw NumericError("training diverged: non-finite loss at epoch " + std::to_string(epoch));
            }
            loss_sum += loss.loss * static_cast<double>(end - begin);
            model.backward(loss.grad);
            for (std::size_t l = 0; l < adam.size(); ++l) {
                nn::adam_step(model.layer(l).parameters(), model.layer(l).gradients(), adam[l]);
            }
            model.project_parameters();
        }
        EpochLog e{epoch, loss_sum / static_cast<double>(n), std::nullopt};
        const bool last = epoch == config.epochs;
        if (!d.test.labels.empty() &&
            (last || (config.eval_every > 0 && epoch % config.eval_every == 0))) {
            e.test_oa = metrics::overall_accuracy(
                confusion_of(model, d.test, dataset.gt.n_classes(), threads));
        }
        log(e);
    }

    // Round to the checkpoint precision so in-memory and reloaded models agree.
    auto params = model.flat_parameters();
    for (double& p : params) p = static_cast<double>(static_cast<float>(p));
    model.set_flat_parameters(params);
    model.project_parameters();

    if (d.test.labels.empty()) {
        throw InputError("dataset '" + dataset.manifest.dataset + "' has no test pixels");
    }
    result.report = evaluate(model, d, dataset, config, threads);
    return result;
}

}  // namespace kanhsi::app
