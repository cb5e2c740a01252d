#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kanhsi/kan/model.hpp"

namespace kanhsi::app {

/// One experiment: dataset, model family and training schedule.
struct TrainConfig {
    std::filesystem::path manifest;
    kan::ModelFamily model = kan::ModelFamily::WavKan;
    std::vector<std::size_t> hidden;  // empty = family default
    kan::MotherWavelet wavelet = kan::MotherWavelet::MexicanHat;
    kan::SplineGrid spline{};
    kan::Activation mlp_activation = kan::Activation::SiLU;
    std::size_t epochs = 100;
    std::size_t batch_size = 64;
    double learning_rate = 1e-3;
    double fraction = 0.10;
    std::uint64_t seed = 42;
    /// Test OA is logged every this many epochs (and after the last); 0 = only at the end.
    std::size_t eval_every = 10;

    // Output locations. Not part of the experiment identity.
    std::optional<std::filesystem::path> checkpoint_out;
    std::optional<std::filesystem::path> metrics_out;

    std::vector<std::size_t> hidden_widths() const;
    kan::ArchitectureOptions architecture() const;

    /// Throws InputError on non-positive widths, epochs < 1, fraction
    /// outside (0, 1), or a bad learning rate / batch size.
    void validate() const;
};

/// The experiment fields only (no output paths), with sorted keys.
nlohmann::json experiment_json(const TrainConfig& config);
/// Inverse of experiment_json; missing keys take defaults.
TrainConfig config_from_json(const nlohmann::json& j);

/// Reads a config file. Relative manifest/output paths are resolved
/// against the config file's directory.
TrainConfig load_config(const std::filesystem::path& path);

/// FNV-1a 64 of the compact experiment JSON, as 16 hex digits.
std::string config_hash(const TrainConfig& config);

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

nlohmann::json to_json(const kan::ModelSpec& spec);
kan::ModelSpec model_spec_from_json(const nlohmann::json& j);

}  // namespace kanhsi::app
