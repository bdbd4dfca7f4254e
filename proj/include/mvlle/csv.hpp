#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace mvlle {

/// Comma-separated numeric matrix, one row per line. Lines starting with
/// '#' are comments; when has_header is set the first non-comment line is
/// skipped. Cells must parse as decimal or scientific-notation doubles.
Eigen::MatrixXd read_csv_matrix(const std::string& path, bool has_header = false);

/// Renders with "%.17g" so that values survive a write/read round trip
/// bit-exactly. An optional comment line is emitted first.
std::string format_csv_matrix(const Eigen::MatrixXd& values,
                              const std::string& comment = "");

std::vector<std::string> read_label_lines(const std::string& path);

std::string format_label_lines(const std::vector<std::string>& labels);

/// Writes via a temp file in the same directory plus an atomic rename, so
/// a crash never leaves a partially written file at `path`.
void write_file_atomic(const std::string& path, const std::string& content);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex characters.
std::string file_digest(const std::string& path);

}  // namespace mvlle
