#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "kanhsi/app/commands.hpp"

namespace app = kanhsi::app;

int main(int argc, char** argv) {
    CLI::App cli{"Wavelet-KAN / Spline-KAN / MLP hyperspectral pixel classifiers"};
    cli.require_subcommand(1);
    cli.fallthrough();
    unsigned threads = 0;
    cli.add_option("--threads", threads, "Inference worker threads (0 = all cores)");

    app::TrainOptions train;
    auto* train_cmd = cli.add_subcommand("train", "Train a model from a JSON config");
    train_cmd->add_option("--config", train.config, "Config JSON")->required()->check(CLI::ExistingFile);
    std::string ckpt_out, metrics_out;
    train_cmd->add_option("--checkpoint-out", ckpt_out, "Checkpoint output path (overrides the config)");
    train_cmd->add_option("--metrics-out", metrics_out, "Metrics JSON output path (overrides the config)");

    app::EvaluateOptions eval;
    std::optional<std::uint64_t> eval_seed;
    std::optional<double> eval_fraction;
    std::string eval_out;
    auto* eval_cmd = cli.add_subcommand("evaluate", "Evaluate a checkpoint on a dataset split");
    eval_cmd->add_option("--checkpoint", eval.checkpoint, "Checkpoint file")->required();
    eval_cmd->add_option("--manifest", eval.manifest, "Dataset manifest JSON")->required();
    eval_cmd->add_option("--seed", eval_seed, "Split seed (default: the training seed)");
    eval_cmd->add_option("--fraction", eval_fraction, "Train fraction (default: the training fraction)");
    eval_cmd->add_option("--out", eval_out, "Write metrics JSON here instead of stdout");

    app::PredictMapOptions map;
    auto* map_cmd = cli.add_subcommand("predict-map", "Classify every pixel and write a PPM map");
    map_cmd->add_option("--checkpoint", map.checkpoint, "Checkpoint file")->required();
    map_cmd->add_option("--manifest", map.manifest, "Dataset manifest JSON")->required();
    map_cmd->add_option("--out", map.out, "Output .ppm")->required();
    map_cmd->add_option("--batch-size", map.batch_size, "Pixels per inference batch")->check(CLI::PositiveNumber);

    auto* grad_cmd = cli.add_subcommand("gradcheck", "Finite-difference check of every layer family");

    app::SelftestOptions self;
    auto* self_cmd = cli.add_subcommand("selftest", "Train every family on separable synthetic blobs");
    self_cmd->add_option("--seed", self.seed, "Data and training seed");
    self_cmd->add_option("--epochs", self.epochs, "Epochs per family")->check(CLI::PositiveNumber);

    std::string synth_dir;
    std::uint64_t synth_seed = 0;
    auto* synth_cmd = cli.add_subcommand("synth", "Write the synthetic blob dataset as NPY + manifest");
    synth_cmd->add_option("--out", synth_dir, "Output directory")->required();
    synth_cmd->add_option("--seed", synth_seed, "Generator seed");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return cli.exit(e) == 0 ? app::kExitOk : app::kExitValidation;
    }

    return app::run_guarded(
        [&]() -> int {
            if (*train_cmd) {
                if (!ckpt_out.empty()) train.checkpoint = ckpt_out;
                if (!metrics_out.empty()) train.metrics = metrics_out;
                train.threads = threads;
                return app::cmd_train(train, std::cout);
            }
            if (*eval_cmd) {
                eval.seed = eval_seed;
                eval.fraction = eval_fraction;
                if (!eval_out.empty()) eval.out = eval_out;
                eval.threads = threads;
                return app::cmd_evaluate(eval, std::cout);
            }
            if (*map_cmd) {
                map.threads = threads;
                return app::cmd_predict_map(map, std::cout);
            }
            if (*grad_cmd) return app::cmd_gradcheck(std::cout);
            if (*self_cmd) {
                self.threads = threads;
                return app::cmd_selftest(self, std::cout);
            }
            if (*synth_cmd) return app::cmd_synth(synth_dir, synth_seed, std::cout);
            return app::kExitValidation;
        },
        std::cerr);
}
