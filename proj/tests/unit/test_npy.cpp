#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "kanhsi/errors.hpp"
#include "kanhsi/hsi/npy.hpp"
#include "temp_dir.hpp"

using namespace kanhsi;
using hsi::DType;

namespace {

std::vector<std::uint8_t> raw(const std::string& header, std::size_t payload_bytes) {
    // Hand-built NPY v1.0 image with a correctly padded header.
    std::string h = header;
    const std::size_t total = 10 + h.size() + 1;
    h.append((64 - total % 64) % 64, ' ');
    h.push_back('\n');
    std::vector<std::uint8_t> out = {0x93, 'N', 'U', 'M', 'P', 'Y', 1, 0};
    out.push_back(static_cast<std::uint8_t>(h.size() & 0xff));
    out.push_back(static_cast<std::uint8_t>(h.size() >> 8));
    out.insert(out.end(), h.begin(), h.end());
    out.resize(out.size() + payload_bytes, 0);
    return out;
}

std::size_t error_offset(const std::vector<std::uint8_t>& bytes) {
    try {
        hsi::parse_npy(bytes);
    } catch (const FormatError& e) {
        return e.offset();
    }
    FAIL("expected FormatError");
    return 0;
}

}  // namespace

TEST_CASE("encode matches the numpy.save v1.0 layout byte for byte") {
    const std::vector<std::size_t> shape = {2, 3};
    const std::vector<float> data = {1, 2, 3, 4, 5, 6};
    const auto bytes = hsi::encode_npy(shape, data);
    const auto expected_head = raw("{'descr': '<f4', 'fortran_order': False, 'shape': (2, 3), }", 0);
    REQUIRE(bytes.size() == expected_head.size() + 24);
    CHECK(std::equal(expected_head.begin(), expected_head.end(), bytes.begin()));
    CHECK(expected_head.size() % 64 == 0);
    CHECK(expected_head.back() == '\n');
    // 1.0f little-endian
    CHECK(bytes[expected_head.size() + 3] == 0x3f);
    CHECK(bytes[expected_head.size() + 2] == 0x80);
}

TEST_CASE("one-dimensional shapes use the trailing-comma tuple") {
    const std::vector<std::size_t> shape = {5};
    const std::vector<std::uint8_t> data = {1, 2, 3, 4, 5};
    const auto bytes = hsi::encode_npy(shape, data);
    const std::string text(bytes.begin() + 10, bytes.end());
    CHECK(text.find("'shape': (5,)") != std::string::npos);
    CHECK(text.find("'descr': '|u1'") != std::string::npos);
}

TEST_CASE("round trip for every supported dtype") {
    const std::vector<std::size_t> shape = {2, 2, 2};
    SUBCASE("f4") {
        const std::vector<float> v = {0.5f, -1.25f, 3e-8f, 1e30f, 0, 1, 2, 3};
        const auto a = hsi::parse_npy(hsi::encode_npy(shape, v));
        CHECK(a.dtype == DType::Float32);
        CHECK(a.shape == shape);
        CHECK(a.as<float>() == v);
    }
    SUBCASE("f8") {
        const std::vector<double> v = {0.1, -2.0, 1e-300, 1e300, 4, 5, 6, 7};
        const auto a = hsi::parse_npy(hsi::encode_npy(shape, v));
        CHECK(a.dtype == DType::Float64);
        CHECK(a.as<double>() == v);
    }
    SUBCASE("u1") {
        const std::vector<std::uint8_t> v = {0, 1, 2, 255, 4, 5, 6, 7};
        CHECK(hsi::parse_npy(hsi::encode_npy(shape, v)).as<std::uint8_t>() == v);
    }
    SUBCASE("u2") {
        const std::vector<std::uint16_t> v = {0, 1, 65535, 300, 4, 5, 6, 7};
        const auto a = hsi::parse_npy(hsi::encode_npy(shape, v));
        CHECK(a.dtype == DType::UInt16);
        CHECK(a.as<std::uint16_t>() == v);
        const std::vector<float> f = a.as<float>();
        CHECK(f[2] == 65535.0f);
    }
}

TEST_CASE("file round trip") {
    TempDir dir;
    const std::vector<std::size_t> shape = {3, 1};
    const std::vector<std::uint16_t> v = {7, 8, 9};
    hsi::write_npy<std::uint16_t>(dir / "a.npy", shape, v);
    const auto a = hsi::read_npy(dir / "a.npy");
    CHECK(a.shape == shape);
    CHECK(a.as<std::uint16_t>() == v);
    CHECK_THROWS_AS(hsi::read_npy(dir / "missing.npy"), IoError);
}

TEST_CASE("header parser tolerates key order and spacing") {
    const auto bytes = raw("{'shape':(2,),'fortran_order':False,'descr':'<f8'}", 16);
    const auto a = hsi::parse_npy(bytes);
    CHECK(a.shape == std::vector<std::size_t>{2});
    CHECK(a.dtype == DType::Float64);
}

TEST_CASE("scalar shape holds one element") {
    const auto a = hsi::parse_npy(raw("{'descr': '<f4', 'fortran_order': False, 'shape': (), }", 4));
    CHECK(a.shape.empty());
    CHECK(a.count() == 1);
}

TEST_CASE("malformed files raise FormatError with the byte offset") {
    const std::string good = "{'descr': '<f4', 'fortran_order': False, 'shape': (2,), }";
    SUBCASE("bad magic") {
        auto b = raw(good, 8);
        b[3] = 'X';
        CHECK(error_offset(b) == 3);
    }
    SUBCASE("version 2.0") {
        auto b = raw(good, 8);
        b[6] = 2;
        CHECK(error_offset(b) == 6);
    }
    SUBCASE("shorter than the preamble") {
        const std::vector<std::uint8_t> b = {0x93, 'N', 'U'};
        CHECK(error_offset(b) == 3);
    }
    SUBCASE("truncated header") {
        auto b = raw(good, 0);
        b.resize(40);
        CHECK(error_offset(b) == 40);
    }
    SUBCASE("truncated payload") {
        auto b = raw(good, 8);
        b.resize(b.size() - 1);
        CHECK(error_offset(b) == b.size());  // first missing byte
    }
    SUBCASE("trailing bytes") {
        auto b = raw(good, 9);
        CHECK(error_offset(b) == b.size() - 1);
    }
    SUBCASE("fortran order") {
        CHECK_THROWS_AS(hsi::parse_npy(raw("{'descr': '<f4', 'fortran_order': True, 'shape': (2,), }", 8)),
                        FormatError);
    }
    SUBCASE("unsupported dtype") {
        CHECK_THROWS_AS(hsi::parse_npy(raw("{'descr': '<i8', 'fortran_order': False, 'shape': (2,), }", 16)),
                        FormatError);
        CHECK_THROWS_AS(hsi::parse_npy(raw("{'descr': '>f4', 'fortran_order': False, 'shape': (2,), }", 8)),
                        FormatError);
    }
    SUBCASE("garbage header") {
        CHECK_THROWS_AS(hsi::parse_npy(raw("{'descr': '<f4', 'shape': (2,), ", 8)), FormatError);
    }
}

TEST_CASE("format error message carries the offset") {
    auto b = raw("{'descr': '<f4', 'fortran_order': False, 'shape': (1,), }", 4);
    b[0] = 0;
    try {
        hsi::parse_npy(b);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("byte offset 0") != std::string::npos);
    }
}
