#include "kanhsi/app/commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "kanhsi/app/checkpoint.hpp"
#include "kanhsi/app/synthetic.hpp"
#include "kanhsi/errors.hpp"
#include "kanhsi/hsi/npy.hpp"
#include "kanhsi/mapviz/render.hpp"

namespace kanhsi::app {

namespace {

std::string metrics_text(const MetricsReport& report) {
    return to_json(report).dump(2) + "\n";
}

void ensure_parent(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    ensure_parent(path);
    const std::vector<std::uint8_t> bytes(text.begin(), text.end());
    hsi::write_bytes(path, bytes);
}

std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

struct LoadedEval {
    Checkpoint ckpt;
    kan::Model model;
    hsi::HsiDataset dataset;
    PreparedData data;
};

LoadedEval load_for_eval(const std::filesystem::path& checkpoint, const std::filesystem::path& manifest,
                         std::optional<std::uint64_t> seed, std::optional<double> fraction) {
    Checkpoint ckpt = load_checkpoint(checkpoint);
    kan::Model model = model_from_checkpoint(ckpt);
    hsi::HsiDataset dataset = hsi::load_dataset(manifest);
    check_compatible(model.spec(), dataset);
    const double f = fraction.value_or(ckpt.config.fraction);
    const std::uint64_t s = seed.value_or(ckpt.config.seed);
    PreparedData data = prepare(dataset, f, s);
    return {std::move(ckpt), std::move(model), std::move(dataset), std::move(data)};
}

}  // namespace

int run_guarded(const std::function<int()>& body, std::ostream& err) {
    try {
        return body();
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

int cmd_train(const TrainOptions& options, std::ostream& out) {
    const TrainConfig config = load_config(options.config);
    const auto stem = options.config.stem().string();
    const auto ckpt_path = options.checkpoint.value_or(config.checkpoint_out.value_or(stem + ".ckpt"));
    const auto metrics_path = options.metrics.value_or(config.metrics_out.value_or(stem + ".metrics.json"));

    const hsi::HsiDataset dataset = hsi::load_dataset(config.manifest);
    out << "dataset " << dataset.manifest.dataset << ": " << dataset.cube.height << "x" << dataset.cube.width
        << "x" << dataset.cube.bands << ", " << dataset.gt.n_classes() << " classes, "
        << dataset.gt.labeled_count() << " labeled pixels\n";

    const auto start = std::chrono::steady_clock::now();
    TrainResult result = train(
        config, dataset,
        [&](const EpochLog& e) {
            out << "epoch " << std::setw(4) << e.epoch << "  loss " << fixed(e.loss, 6);
            if (e.test_oa) out << "  test_oa " << fixed(*e.test_oa, 4);
            out << '\n';
        },
        options.threads);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    for (auto c : result.data.split.empty_classes) {
        out << "warning: class " << c << " has no labeled pixels, skipped\n";
    }
    for (auto c : result.data.split.singleton_classes) {
        out << "warning: class " << c << " has a single labeled pixel, used for training only\n";
    }

    ensure_parent(ckpt_path);
    save_checkpoint(make_checkpoint(result.model, config, result.report), ckpt_path);
    write_text(metrics_path, metrics_text(result.report));
    out << "model " << result.report.model << " (" << result.model.parameter_count() << " parameters), "
        << "n_train " << result.report.n_train << ", n_test " << result.report.n_test << ", "
        << fixed(secs, 1) << " s\n";
    out << "OA " << fixed(result.report.oa, 4) << "  kappa " << fixed(result.report.kappa, 4) << '\n';
    out << "checkpoint " << ckpt_path.string() << "\nmetrics " << metrics_path.string() << '\n';
    return kExitOk;
}

MetricsReport evaluate_checkpoint(const EvaluateOptions& options) {
    const LoadedEval ev = load_for_eval(options.checkpoint, options.manifest, options.seed, options.fraction);
    return evaluate(ev.model, ev.data, ev.dataset, ev.ckpt.config, options.threads);
}

int cmd_evaluate(const EvaluateOptions& options, std::ostream& out) {
    const std::string text = metrics_text(evaluate_checkpoint(options));
    if (options.out) {
        write_text(*options.out, text);
    } else {
        out << text;
    }
    return kExitOk;
}

int cmd_predict_map(const PredictMapOptions& options, std::ostream& out) {
    const LoadedEval ev = load_for_eval(options.checkpoint, options.manifest, options.seed, options.fraction);
    const mapviz::Palette palette = mapviz::palette_for(ev.dataset.manifest);
    const mapviz::LabelMap map =
        mapviz::predict_full_scene(ev.model, ev.dataset.cube, ev.data.stats, options.batch_size, options.threads);
    ensure_parent(options.out);
    mapviz::write_map(options.out, map, palette);
    out << "wrote " << map.width << "x" << map.height << " map to " << options.out.string() << '\n';
    return kExitOk;
}

int cmd_gradcheck(const std::vector<GradcheckFamily>& families, std::ostream& out) {
    const GradcheckSummary s = run_gradcheck(families);
    for (const auto& f : s.families) {
        char err[32];
        std::snprintf(err, sizeof err, "%.3e", f.max_error);
        out << (f.passed ? "PASS " : "FAIL ") << std::left << std::setw(20) << f.name << std::right
            << " max_rel_error " << err << "  (" << f.instances << " instances)\n";
    }
    out << (s.passed() ? "gradcheck passed" : "gradcheck FAILED") << " (threshold " << s.threshold << ")\n";
    return s.passed() ? kExitOk : kExitValidation;
}

int cmd_gradcheck(std::ostream& out) {
    return cmd_gradcheck(default_gradcheck_families(), out);
}

TrainConfig selftest_config(kan::ModelFamily family, const SelftestOptions& options) {
    TrainConfig c;
    c.model = family;
    c.hidden = {32};
    c.epochs = options.epochs;
    c.batch_size = 16;
    c.learning_rate = 5e-3;
    c.fraction = 0.3;
    c.seed = options.seed;
    c.eval_every = 0;
    return c;
}

std::vector<SelftestResult> run_selftest(const SelftestOptions& options) {
    BlobOptions blobs;
    blobs.seed = options.seed;
    const hsi::HsiDataset dataset = make_blobs(blobs);
    std::vector<SelftestResult> results;
    for (auto family : {kan::ModelFamily::WavKan, kan::ModelFamily::SplineKan, kan::ModelFamily::Mlp}) {
        const TrainResult r = train(selftest_config(family, options), dataset, {}, options.threads);
        SelftestResult s{family, r.report.oa, r.history.front().loss, r.history.back().loss, false};
        s.passed = s.oa >= 0.99 && s.final_loss < s.initial_loss;
        results.push_back(s);
    }
    return results;
}

int cmd_selftest(const SelftestOptions& options, std::ostream& out) {
    bool ok = true;
    for (const auto& r : run_selftest(options)) {
        out << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(10) << kan::to_string(r.family)
            << std::right << " test_oa " << fixed(r.oa, 4) << "  loss " << fixed(r.initial_loss, 4) << " -> "
            << fixed(r.final_loss, 4) << '\n';
        ok = ok && r.passed;
    }
    out << (ok ? "selftest passed" : "selftest FAILED") << '\n';
    return ok ? kExitOk : kExitValidation;
}

int cmd_synth(const std::filesystem::path& dir, std::uint64_t seed, std::ostream& out) {
    BlobOptions o;
    o.seed = seed;
    const auto manifest = write_dataset(make_blobs(o), dir);
    out << "wrote " << manifest.string() << '\n';
    return kExitOk;
}

}  // namespace kanhsi::app
