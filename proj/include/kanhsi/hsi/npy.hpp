#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace kanhsi::hsi {

/// Element types accepted in NPY containers: '<f4', '<f8', '|u1', '<u2'.
enum class DType { Float32, Float64, UInt8, UInt16 };

std::string descr(DType dtype);
std::size_t item_size(DType dtype);

/// A C-order array read from an NPY v1.0 file. Payload is kept as raw
/// little-endian bytes; as<T>() decodes and converts.
struct NpyArray {
    std::vector<std::size_t> shape;
    DType dtype = DType::Float32;
    std::vector<std::uint8_t> payload;

    std::size_t count() const;

    template <typename T>
    std::vector<T> as() const;
};

extern template std::vector<float> NpyArray::as<float>() const;
extern template std::vector<double> NpyArray::as<double>() const;
extern template std::vector<std::uint8_t> NpyArray::as<std::uint8_t>() const;
extern template std::vector<std::uint16_t> NpyArray::as<std::uint16_t>() const;

/// Parses an NPY v1.0 byte image. Throws FormatError with the byte offset
/// of the first problem.
NpyArray parse_npy(std::span<const std::uint8_t> bytes);
NpyArray read_npy(const std::filesystem::path& path);

/// Encodes exactly as numpy.save does for version 1.0: magic, 01 00,
/// u16 header length, dict header space-padded and newline-terminated to
/// a 64-byte boundary, then the payload.
std::vector<std::uint8_t> encode_npy(std::span<const std::size_t> shape, std::span<const float> data);
std::vector<std::uint8_t> encode_npy(std::span<const std::size_t> shape, std::span<const double> data);
std::vector<std::uint8_t> encode_npy(std::span<const std::size_t> shape,
                                     std::span<const std::uint8_t> data);
std::vector<std::uint8_t> encode_npy(std::span<const std::size_t> shape,
                                     std::span<const std::uint16_t> data);

template <typename T>
void write_npy(const std::filesystem::path& path, std::span<const std::size_t> shape,
               std::span<const T> data);

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);

}  // namespace kanhsi::hsi
