#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kanhsi/app/config.hpp"
#include "kanhsi/hsi/dataset.hpp"
#include "kanhsi/hsi/split.hpp"
#include "kanhsi/kan/model.hpp"
#include "kanhsi/metrics/confusion.hpp"

namespace kanhsi::app {

struct MetricsReport {
    std::string dataset;
    std::string model;
    double oa = 0.0;
    double kappa = 0.0;
    std::vector<double> per_class;  // NaN where a class has no test pixels
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::uint64_t seed = 0;
    std::string config_hash;
    metrics::ConfusionMatrix confusion{0};
};

/// {dataset, model, oa, kappa, per_class, n_train, n_test, seed,
///  config_hash, confusion}. oa and kappa are rounded to 4 decimals; the
/// raw values are kept under oa_exact / kappa_exact. NaN becomes null.
nlohmann::json to_json(const MetricsReport& report);
MetricsReport metrics_from_json(const nlohmann::json& j);

double round4(double v);

/// Seeds of the independent random streams derived from the run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);
inline constexpr std::uint64_t kInitStream = 1;
inline constexpr std::uint64_t kShuffleStream = 2;

/// View of a dataset prepared for one split: train/test rows z-scored with
/// statistics of the train rows.
struct PreparedData {
    hsi::SplitIndices split;
    hsi::BandStats stats;
    hsi::LabeledSpectra train;
    hsi::LabeledSpectra test;
};

PreparedData prepare(const hsi::HsiDataset& dataset, double fraction, std::uint64_t seed);

struct EpochLog {
    std::size_t epoch = 0;       // 0 = before any update
    double loss = 0.0;           // mean train loss over the epoch
    std::optional<double> test_oa;
};

struct TrainResult {
    kan::Model model;
    PreparedData data;
    std::vector<EpochLog> history;
    MetricsReport report;
};

using EpochCallback = std::function<void(const EpochLog&)>;

/// Adam + softmax cross-entropy on the train split. Aborts with
/// NumericError on a non-finite batch loss. Parameters are rounded to
/// float32 before the final evaluation, so the report matches what an
/// evaluation of the saved checkpoint produces.
TrainResult train(const TrainConfig& config, const hsi::HsiDataset& dataset,
                  const EpochCallback& on_epoch = {}, unsigned threads = 0);

/// Mean loss of the model over a labeled set (no updates).
double mean_loss(const kan::Model& model, const hsi::LabeledSpectra& data, unsigned threads = 0);

metrics::ConfusionMatrix confusion_of(const kan::Model& model, const hsi::LabeledSpectra& data,
                                      std::size_t n_classes, unsigned threads = 0);

/// Evaluates on data.test and fills every report field.
MetricsReport evaluate(const kan::Model& model, const PreparedData& data,
                       const hsi::HsiDataset& dataset, const TrainConfig& config,
                       unsigned threads = 0);

/// Throws InputError when the model does not fit the dataset.
void check_compatible(const kan::ModelSpec& spec, const hsi::HsiDataset& dataset);

}  // namespace kanhsi::app
