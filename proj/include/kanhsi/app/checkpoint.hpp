#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "kanhsi/app/config.hpp"
#include "kanhsi/app/pipeline.hpp"
#include "kanhsi/kan/model.hpp"

namespace kanhsi::app {

/// File layout:
///
///     "KANHSI01"                 8 bytes
///     header length              u32 little-endian
///     JSON header                UTF-8, sorted keys
///     parameters                 float32 little-endian, Model::flat_parameters() order
///
/// Header keys: format_version, model (ModelSpec), config (experiment
/// fields), metrics, seed, param_count, param_checksum (FNV-1a 64 of the
/// blob), created (UTC timestamp; the only field that varies between
/// identical runs).
struct Checkpoint {
    static constexpr std::uint32_t kFormatVersion = 1;

    kan::ModelSpec spec;
    TrainConfig config;
    std::optional<MetricsReport> metrics;
    std::uint64_t seed = 0;
    std::vector<float> parameters;
    std::string created;
};

Checkpoint make_checkpoint(const kan::Model& model, const TrainConfig& config,
                           const std::optional<MetricsReport>& metrics);

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt);
/// Verifies magic, version, parameter count, checksum and finiteness.
/// Throws FormatError on any mismatch.
Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

kan::Model model_from_checkpoint(const Checkpoint& ckpt);

/// Header JSON of an encoded checkpoint with `created` removed, followed by
/// the parameter blob; equal for byte-identical runs.
std::vector<std::uint8_t> checkpoint_identity(std::span<const std::uint8_t> bytes);

std::string utc_timestamp();

}  // namespace kanhsi::app
