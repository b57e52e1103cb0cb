#pragma once

#include "alpet/matrix.hpp"

#include <cstdint>
#include <filesystem>

namespace alpet {

// Binary matrix container shared by embeddings, surprisal vectors and class
// probabilities. Layout (little-endian):
//
//   offset 0  4 bytes  magic "ALPE"
//   offset 4  u16      version (1)
//   offset 6  u8       kind
//   offset 7  u32      rows
//   offset 11 u32      cols
//   offset 15 rows*cols f32, row-major
enum class MatrixKind : std::uint8_t {
    embedding = 1,
    surprisal = 2,
    probability = 3,
};

inline constexpr std::size_t kMatrixHeaderBytes = 15;
inline constexpr std::uint16_t kMatrixFormatVersion = 1;

struct MatrixFile {
    MatrixKind kind;
    Matrix matrix;
};

// Values are stored as f32; callers wanting bit-exact round trips should
// hand in values already representable as floats.
void write_matrix(const std::filesystem::path& path, MatrixKind kind, const Matrix& matrix);
MatrixFile read_matrix(const std::filesystem::path& path);

// Reads and checks the kind byte.
Matrix read_matrix(const std::filesystem::path& path, MatrixKind expected);

} // namespace alpet
