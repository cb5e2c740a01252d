#include "kanhsi/app/checkpoint.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>

#include "kanhsi/errors.hpp"
#include "kanhsi/hsi/npy.hpp"

namespace kanhsi::app {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'K', 'A', 'N', 'H', 'S', 'I', '0', '1'};
constexpr std::size_t kPrefix = 12;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::vector<std::uint8_t> blob_of(std::span<const float> params) {
    std::vector<std::uint8_t> blob;
    blob.reserve(4 * params.size());
    for (float f : params) put_u32(blob, std::bit_cast<std::uint32_t>(f));
    return blob;
}

struct Split {
    json header;
    std::span<const std::uint8_t> header_bytes;
    std::span<const std::uint8_t> blob;
};

Split split_file(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kPrefix) {
        throw FormatError("checkpoint: file shorter than its prefix", bytes.size());
    }
    if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
        throw FormatError("checkpoint: bad magic (expected KANHSI01)", 0);
    }
    const std::uint32_t len = get_u32(bytes.data() + 8);
    if (bytes.size() - kPrefix < len) {
        throw FormatError("checkpoint: header truncated", bytes.size());
    }
    Split s;
    s.header_bytes = bytes.subspan(kPrefix, len);
    s.blob = bytes.subspan(kPrefix + len);
    try {
        s.header = json::parse(s.header_bytes.begin(), s.header_bytes.end());
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("checkpoint: header is not JSON: ") + e.what(), kPrefix + e.byte);
    }
    return s;
}

}  // namespace

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Checkpoint make_checkpoint(const kan::Model& model, const TrainConfig& config,
                           const std::optional<MetricsReport>& metrics) {
    Checkpoint c;
    c.spec = model.spec();
    c.config = config;
    c.config.checkpoint_out.reset();
    c.config.metrics_out.reset();
    c.metrics = metrics;
    c.seed = config.seed;
    for (double p : model.flat_parameters()) c.parameters.push_back(static_cast<float>(p));
    c.created = utc_timestamp();
    return c;
}

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt) {
    const auto blob = blob_of(ckpt.parameters);
    json h;
    h["format_version"] = Checkpoint::kFormatVersion;
    h["model"] = to_json(ckpt.spec);
    h["config"] = experiment_json(ckpt.config);
    h["metrics"] = ckpt.metrics ? to_json(*ckpt.metrics) : json(nullptr);
    h["seed"] = ckpt.seed;
    h["param_count"] = ckpt.parameters.size();
    h["param_checksum"] = hex64(fnv1a64(blob.data(), blob.size()));
    h["created"] = ckpt.created;
    const std::string text = h.dump();

    std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
    put_u32(out, static_cast<std::uint32_t>(text.size()));
    out.insert(out.end(), text.begin(), text.end());
    out.insert(out.end(), blob.begin(), blob.end());
    return out;
}

Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
    const Split s = split_file(bytes);
    const std::size_t blob_offset = kPrefix + s.header_bytes.size();
    Checkpoint c;
    try {
        const auto version = s.header.at("format_version").get<std::uint32_t>();
        if (version != Checkpoint::kFormatVersion) {
            throw FormatError("checkpoint: unsupported format_version " + std::to_string(version), kPrefix);
        }
        c.spec = model_spec_from_json(s.header.at("model"));
        c.config = config_from_json(s.header.at("config"));
        if (!s.header.at("metrics").is_null()) c.metrics = metrics_from_json(s.header.at("metrics"));
        c.seed = s.header.at("seed").get<std::uint64_t>();
        c.created = s.header.value("created", std::string{});
        const auto count = s.header.at("param_count").get<std::size_t>();
        if (count != kan::parameter_count(c.spec)) {
            throw FormatError("checkpoint: param_count " + std::to_string(count) +
                                  " does not match the model (" +
                                  std::to_string(kan::parameter_count(c.spec)) + ")",
                              kPrefix);
        }
        if (s.blob.size() != 4 * count) {
            throw FormatError("checkpoint: parameter blob has " + std::to_string(s.blob.size()) +
                                  " bytes, expected " + std::to_string(4 * count),
                              blob_offset);
        }
        const auto checksum = hex64(fnv1a64(s.blob.data(), s.blob.size()));
        if (checksum != s.header.at("param_checksum").get<std::string>()) {
            throw FormatError("checkpoint: parameter checksum mismatch", blob_offset);
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("checkpoint: bad header: ") + e.what(), kPrefix);
    } catch (const InputError& e) {
        throw FormatError(std::string("checkpoint: bad header: ") + e.what(), kPrefix);
    }
    c.parameters.resize(s.blob.size() / 4);
    for (std::size_t i = 0; i < c.parameters.size(); ++i) {
        c.parameters[i] = std::bit_cast<float>(get_u32(s.blob.data() + 4 * i));
        if (!std::isfinite(c.parameters[i])) {
            throw FormatError("checkpoint: non-finite parameter " + std::to_string(i), blob_offset + 4 * i);
        }
    }
    return c;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    hsi::write_bytes(path, encode_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    const auto bytes = hsi::read_bytes(path);
    return decode_checkpoint(bytes);
}

kan::Model model_from_checkpoint(const Checkpoint& ckpt) {
    kan::Model model(ckpt.spec);
    const std::vector<double> params(ckpt.parameters.begin(), ckpt.parameters.end());
    model.set_flat_parameters(params);
    model.project_parameters();
    return model;
}

std::vector<std::uint8_t> checkpoint_identity(std::span<const std::uint8_t> bytes) {
    Split s = split_file(bytes);
    s.header.erase("created");
    const std::string text = s.header.dump();
    std::vector<std::uint8_t> out(text.begin(), text.end());
    out.insert(out.end(), s.blob.begin(), s.blob.end());
    return out;
}

}  // namespace kanhsi::app
