#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "kanhsi/app/gradcheck_suite.hpp"
#include "kanhsi/app/pipeline.hpp"

namespace kanhsi::app {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitIo = 2 };

/// Runs `body`, reporting exceptions on `err` and mapping them to exit
/// codes: I/O and format errors give 2, every other failure gives 1.
int run_guarded(const std::function<int()>& body, std::ostream& err);

struct TrainOptions {
    std::filesystem::path config;
    std::optional<std::filesystem::path> checkpoint;  // overrides the config
    std::optional<std::filesystem::path> metrics;
    unsigned threads = 0;
};

/// Trains, then writes the checkpoint and the metrics JSON. Outputs that
/// are named neither on the command line nor in the config default to
/// <config stem>.ckpt / <config stem>.metrics.json in the working directory.
int cmd_train(const TrainOptions& options, std::ostream& out);

struct EvaluateOptions {
    std::filesystem::path checkpoint;
    std::filesystem::path manifest;
    std::optional<std::uint64_t> seed;  // default: the checkpoint's
    std::optional<double> fraction;
    std::optional<std::filesystem::path> out;  // default: stdout
    unsigned threads = 0;
};

MetricsReport evaluate_checkpoint(const EvaluateOptions& options);
int cmd_evaluate(const EvaluateOptions& options, std::ostream& out);

struct PredictMapOptions {
    std::filesystem::path checkpoint;
    std::filesystem::path manifest;
    std::filesystem::path out;
    std::optional<std::uint64_t> seed;
    std::optional<double> fraction;
    std::size_t batch_size = 4096;
    unsigned threads = 0;
};

int cmd_predict_map(const PredictMapOptions& options, std::ostream& out);

int cmd_gradcheck(std::ostream& out);
int cmd_gradcheck(const std::vector<GradcheckFamily>& families, std::ostream& out);

struct SelftestOptions {
    std::uint64_t seed = 0;
    std::size_t epochs = 50;
    unsigned threads = 0;
};

struct SelftestResult {
    kan::ModelFamily family;
    double oa = 0.0;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    bool passed = false;
};

/// The training config used for each family on the blob data.
TrainConfig selftest_config(kan::ModelFamily family, const SelftestOptions& options);
std::vector<SelftestResult> run_selftest(const SelftestOptions& options);
int cmd_selftest(const SelftestOptions& options, std::ostream& out);

/// Writes the blob dataset as NPY + manifest into `dir`.
int cmd_synth(const std::filesystem::path& dir, std::uint64_t seed, std::ostream& out);

}  // namespace kanhsi::app
