#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "bzsl/types.hpp"

namespace bzsl {

// bin layout: "BDLM", u32 version (1), u64 rows, u64 cols, then rows*cols
// little-endian IEEE-754 doubles in column-major order.
// csv layout: one line per matrix row, comma-separated, no header.
enum class MatrixFormat { csv, bin };

// ".csv" selects csv; anything else is bin.
MatrixFormat format_for(const std::filesystem::path& path);

Matrix load_matrix(const std::filesystem::path& path, MatrixFormat format);
Matrix load_matrix(const std::filesystem::path& path);
void save_matrix(const Matrix& m, const std::filesystem::path& path, MatrixFormat format);
void save_matrix(const Matrix& m, const std::filesystem::path& path);

// Error{parse} messages carry the 1-based line number.
Matrix parse_csv_matrix(std::string_view text);
std::string format_csv_matrix(const Matrix& m);

Matrix decode_bin_matrix(std::string_view bytes);
std::string encode_bin_matrix(const Matrix& m);

// Two-column CSV "instance_id,label" with an optional header line of exactly
// that text. Instance ids must be 0..n-1 (any order); the result is indexed by id.
Labels load_labels(const std::filesystem::path& path);
Labels parse_labels(std::string_view text);
void save_labels(const Labels& labels, const std::filesystem::path& path);
std::string format_labels(const Labels& labels);

}  // namespace bzsl
