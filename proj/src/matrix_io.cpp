#include "alpet/matrix_io.hpp"

#include "alpet/error.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <vector>

namespace alpet {
namespace {

constexpr std::array<char, 4> kMagic{'A', 'L', 'P', 'E'};

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xFF));
    out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<unsigned char>((v >> shift) & 0xFF));
}

std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

bool valid_kind(std::uint8_t kind) { return kind >= 1 && kind <= 3; }

} // namespace

void write_matrix(const std::filesystem::path& path, MatrixKind kind, const Matrix& matrix) {
    if (!valid_kind(static_cast<std::uint8_t>(kind))) fail(Errc::invalid_argument, "unknown matrix kind");
    if (matrix.rows() > std::numeric_limits<std::uint32_t>::max() ||
        matrix.cols() > std::numeric_limits<std::uint32_t>::max()) {
        fail(Errc::invalid_argument, "matrix too large for the container");
    }
    std::vector<unsigned char> bytes;
    bytes.reserve(kMatrixHeaderBytes + matrix.values().size() * 4);
    bytes.insert(bytes.end(), kMagic.begin(), kMagic.end());
    put_u16(bytes, kMatrixFormatVersion);
    bytes.push_back(static_cast<unsigned char>(kind));
    put_u32(bytes, static_cast<std::uint32_t>(matrix.rows()));
    put_u32(bytes, static_cast<std::uint32_t>(matrix.cols()));
    for (double v : matrix.values()) {
        const auto f = static_cast<float>(v);
        if (!std::isfinite(v) || !std::isfinite(f)) fail(Errc::non_finite, "cannot store " + std::to_string(v));
        put_u32(bytes, std::bit_cast<std::uint32_t>(f));
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(Errc::io, "write failed for " + path.string());
}

MatrixFile read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io, "cannot open " + path.string());
    const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    const auto name = path.string();
    if (bytes.size() < kMatrixHeaderBytes) fail(Errc::truncated, name + ": header needs 15 bytes");
    if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) fail(Errc::format, name + ": bad magic");
    const auto version = static_cast<std::uint16_t>(bytes[4] | (bytes[5] << 8));
    if (version != kMatrixFormatVersion) {
        fail(Errc::format, name + ": unsupported version " + std::to_string(version));
    }
    const std::uint8_t kind = bytes[6];
    if (!valid_kind(kind)) fail(Errc::format, name + ": unknown kind " + std::to_string(kind));
    const std::uint64_t rows = get_u32(bytes.data() + 7);
    const std::uint64_t cols = get_u32(bytes.data() + 11);
    const std::uint64_t payload = rows * cols * 4;
    const std::uint64_t have = bytes.size() - kMatrixHeaderBytes;
    if (have < payload) {
        fail(Errc::truncated, name + ": payload has " + std::to_string(have) + " bytes, expected " +
                                  std::to_string(payload));
    }
    if (have > payload) fail(Errc::format, name + ": trailing bytes after payload");
    std::vector<double> values(rows * cols);
    const unsigned char* p = bytes.data() + kMatrixHeaderBytes;
    for (std::size_t i = 0; i < values.size(); ++i, p += 4) {
        const float f = std::bit_cast<float>(get_u32(p));
        if (!std::isfinite(f)) fail(Errc::non_finite, name + ": entry " + std::to_string(i));
        values[i] = f;
    }
    return {static_cast<MatrixKind>(kind), Matrix(rows, cols, std::move(values))};
}

Matrix read_matrix(const std::filesystem::path& path, MatrixKind expected) {
    auto file = read_matrix(path);
    if (file.kind != expected) {
        fail(Errc::format, path.string() + ": kind " + std::to_string(static_cast<int>(file.kind)) +
                               ", expected " + std::to_string(static_cast<int>(expected)));
    }
    return std::move(file.matrix);
}

} // namespace alpet
