#include "kanhsi/hsi/npy.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string_view>

#include "kanhsi/errors.hpp"

namespace kanhsi::hsi {

namespace {

constexpr std::uint8_t kMagic[6] = {0x93, 'N', 'U', 'M', 'P', 'Y'};
constexpr std::size_t kPreamble = 10;  // magic + version + u16 header length

template <typename T>
constexpr DType dtype_of();
template <>
constexpr DType dtype_of<float>() { return DType::Float32; }
template <>
constexpr DType dtype_of<double>() { return DType::Float64; }
template <>
constexpr DType dtype_of<std::uint8_t>() { return DType::UInt8; }
template <>
constexpr DType dtype_of<std::uint16_t>() { return DType::UInt16; }

template <typename T>
T load_le(const std::uint8_t* p) {
    using U = std::conditional_t<sizeof(T) == 1, std::uint8_t,
              std::conditional_t<sizeof(T) == 2, std::uint16_t,
              std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>>;
    U u = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) {
        u |= static_cast<U>(static_cast<U>(p[b]) << (8 * b));
    }
    return std::bit_cast<T>(u);
}

template <typename T>
void store_le(T v, std::vector<std::uint8_t>& out) {
    using U = std::conditional_t<sizeof(T) == 1, std::uint8_t,
              std::conditional_t<sizeof(T) == 2, std::uint16_t,
              std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>>>;
    const U u = std::bit_cast<U>(v);
    for (std::size_t b = 0; b < sizeof(T); ++b) {
        out.push_back(static_cast<std::uint8_t>(u >> (8 * b)));
    }
}

/// Minimal reader for the python dict literal numpy writes as the header.
class HeaderParser {
public:
    HeaderParser(std::string_view text, std::uint64_t base) : s_(text), base_(base) {}

    void parse(std::string& descr, bool& fortran, std::vector<std::size_t>& shape) {
        bool seen_descr = false;
        bool seen_fortran = false;
        bool seen_shape = false;
        skip_ws();
        expect('{');
        for (;;) {
            skip_ws();
            if (peek() == '}') {
                ++pos_;
                break;
            }
            const std::string key = quoted();
            skip_ws();
            expect(':');
            skip_ws();
            if (key == "descr") {
                descr = quoted();
                seen_descr = true;
            } else if (key == "fortran_order") {
                fortran = boolean();
                seen_fortran = true;
            } else if (key == "shape") {
                shape = tuple();
                seen_shape = true;
            } else {
                fail("unexpected header key '" + key + "'");
            }
            skip_ws();
            if (peek() == ',') {
                ++pos_;
            }
        }
        if (!seen_descr || !seen_fortran || !seen_shape) {
            fail("header must define descr, fortran_order and shape");
        }
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw FormatError("npy: " + what, base_ + pos_);
    }
    char peek() const {
        if (pos_ >= s_.size()) fail("header ends early");
        return s_[pos_];
    }
    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    std::string quoted() {
        const char q = peek();
        if (q != '\'' && q != '"') fail("expected quoted string");
        const std::size_t end = s_.find(q, pos_ + 1);
        if (end == std::string_view::npos) fail("unterminated string");
        std::string out(s_.substr(pos_ + 1, end - pos_ - 1));
        pos_ = end + 1;
        return out;
    }
    bool boolean() {
        if (s_.substr(pos_, 4) == "True") {
            pos_ += 4;
            return true;
        }
        if (s_.substr(pos_, 5) == "False") {
            pos_ += 5;
            return false;
        }
        fail("expected True or False");
    }
    std::vector<std::size_t> tuple() {
        std::vector<std::size_t> dims;
        expect('(');
        for (;;) {
            skip_ws();
            if (peek() == ')') {
                ++pos_;
                return dims;
            }
            if (peek() < '0' || peek() > '9') fail("expected dimension");
            std::size_t v = 0;
            while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') {
                v = v * 10 + static_cast<std::size_t>(s_[pos_] - '0');
                ++pos_;
            }
            dims.push_back(v);
            skip_ws();
            if (peek() == ',') ++pos_;
        }
    }

    std::string_view s_;
    std::uint64_t base_;
    std::size_t pos_ = 0;
};

template <typename T>
std::vector<std::uint8_t> encode(std::span<const std::size_t> shape, std::span<const T> data) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    if (n != data.size()) {
        throw InputError("encode_npy: shape holds " + std::to_string(n) + " elements, data has " +
                         std::to_string(data.size()));
    }
    std::string header = "{'descr': '" + descr(dtype_of<T>()) + "', 'fortran_order': False, 'shape': (";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        header += std::to_string(shape[i]);
        if (shape.size() == 1 || i + 1 < shape.size()) header += ",";
        if (i + 1 < shape.size()) header += " ";
    }
    header += "), }";
    const std::size_t total = kPreamble + header.size() + 1;
    header.append((64 - total % 64) % 64, ' ');
    header += '\n';
    if (header.size() > 0xFFFF) {
        throw InputError("encode_npy: header too long for version 1.0");
    }

    std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
    out.push_back(1);
    out.push_back(0);
    store_le(static_cast<std::uint16_t>(header.size()), out);
    out.insert(out.end(), header.begin(), header.end());
    out.reserve(out.size() + data.size() * sizeof(T));
    for (T v : data) store_le(v, out);
    return out;
}

}  // namespace

std::string descr(DType dtype) {
    switch (dtype) {
        case DType::Float32:
            return "<f4";
        case DType::Float64:
            return "<f8";
        case DType::UInt8:
            return "|u1";
        case DType::UInt16:
            return "<u2";
    }
    return "?";
}

std::size_t item_size(DType dtype) {
    switch (dtype) {
        case DType::Float32:
            return 4;
        case DType::Float64:
            return 8;
        case DType::UInt8:
            return 1;
        case DType::UInt16:
            return 2;
    }
    return 0;
}

std::size_t NpyArray::count() const {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

template <typename T>
std::vector<T> NpyArray::as() const {
    const std::size_t n = count();
    std::vector<T> out(n);
    const std::uint8_t* p = payload.data();
    for (std::size_t i = 0; i < n; ++i) {
        switch (dtype) {
            case DType::Float32:
                out[i] = static_cast<T>(load_le<float>(p + 4 * i));
                break;
            case DType::Float64:
                out[i] = static_cast<T>(load_le<double>(p + 8 * i));
                break;
            case DType::UInt8:
                out[i] = static_cast<T>(p[i]);
                break;
            case DType::UInt16:
                out[i] = static_cast<T>(load_le<std::uint16_t>(p + 2 * i));
                break;
        }
    }
    return out;
}

template std::vector<float> NpyArray::as<float>() const;
template std::vector<double> NpyArray::as<double>() const;
template std::vector<std::uint8_t> NpyArray::as<std::uint8_t>() const;
template std::vector<std::uint16_t> NpyArray::as<std::uint16_t>() const;

NpyArray parse_npy(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kPreamble) {
        throw FormatError("npy: file shorter than the fixed preamble", bytes.size());
    }
    for (std::size_t i = 0; i < 6; ++i) {
        if (bytes[i] != kMagic[i]) {
            throw FormatError("npy: bad magic", i);
        }
    }
    if (bytes[6] != 1 || bytes[7] != 0) {
        throw FormatError("npy: unsupported version " + std::to_string(bytes[6]) + "." +
                              std::to_string(bytes[7]) + " (only 1.0)",
                          6);
    }
    const std::size_t header_len = load_le<std::uint16_t>(bytes.data() + 8);
    if (bytes.size() < kPreamble + header_len) {
        throw FormatError("npy: header truncated", bytes.size());
    }
    const std::string_view header(reinterpret_cast<const char*>(bytes.data() + kPreamble), header_len);
    if (header.empty() || header.back() != '\n') {
        throw FormatError("npy: header not newline-terminated", kPreamble + header_len - 1);
    }

    std::string type;
    bool fortran = false;
    NpyArray arr;
    HeaderParser(header, kPreamble).parse(type, fortran, arr.shape);
    if (type == "<f4") {
        arr.dtype = DType::Float32;
    } else if (type == "<f8") {
        arr.dtype = DType::Float64;
    } else if (type == "|u1" || type == "<u1") {
        arr.dtype = DType::UInt8;
    } else if (type == "<u2") {
        arr.dtype = DType::UInt16;
    } else {
        throw FormatError("npy: unsupported dtype '" + type + "'", kPreamble);
    }
    if (fortran) {
        throw FormatError("npy: fortran_order arrays are not supported", kPreamble);
    }

    const std::size_t offset = kPreamble + header_len;
    const std::size_t need = arr.count() * item_size(arr.dtype);
    if (bytes.size() - offset < need) {
        throw FormatError("npy: payload truncated, expected " + std::to_string(need) +
                              " bytes, found " + std::to_string(bytes.size() - offset),
                          bytes.size());
    }
    if (bytes.size() - offset > need) {
        throw FormatError("npy: trailing bytes after payload", offset + need);
    }
    arr.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(offset), bytes.end());
    return arr;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read error on '" + path.string() + "'");
    }
    return bytes;
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("write error on '" + path.string() + "'");
    }
}

NpyArray read_npy(const std::filesystem::path& path) {
    const auto bytes = read_bytes(path);
    return parse_npy(bytes);
}

std::vector<std::uint8_t> encode_npy(std::span<const std::size_t> shape, std::span<const float> data) {
    return encode(shape, data);
}
std::vector<std::uint8_t> encode_npy(std::span<const std::size_t> shape, std::span<const double> data) {
    return encode(shape, data);
}
std::vector<std::uint8_t> encode_npy(std::span<const std::size_t> shape,
                                     std::span<const std::uint8_t> data) {
    return encode(shape, data);
}
std::vector<std::uint8_t> encode_npy(std::span<const std::size_t> shape,
                                     std::span<const std::uint16_t> data) {
    return encode(shape, data);
}

template <typename T>
void write_npy(const std::filesystem::path& path, std::span<const std::size_t> shape,
               std::span<const T> data) {
    write_bytes(path, encode(shape, data));
}

template void write_npy<float>(const std::filesystem::path&, std::span<const std::size_t>,
                               std::span<const float>);
template void write_npy<double>(const std::filesystem::path&, std::span<const std::size_t>,
                                std::span<const double>);
template void write_npy<std::uint8_t>(const std::filesystem::path&, std::span<const std::size_t>,
                                      std::span<const std::uint8_t>);
template void write_npy<std::uint16_t>(const std::filesystem::path&, std::span<const std::size_t>,
                                       std::span<const std::uint16_t>);

}  // namespace kanhsi::hsi
