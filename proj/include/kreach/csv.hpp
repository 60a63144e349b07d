#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "kreach/types.hpp"

namespace kreach {

/// Shortest decimal that parses back to exactly `value`.
std::string format_double(double value);

/// Reads a point file: a header line (e.g. `x1,...,xn`) followed by one
/// comma-separated row per point. Errors name the offending line.
MatrixXd read_points_csv(std::istream& in, const std::string& source = "<stream>");
MatrixXd read_points_csv(const std::filesystem::path& path);

/// Header `x1,...,xn`, one row per point.
void write_points_csv(std::ostream& out, const MatrixXd& points);
void write_points_csv(const std::filesystem::path& path, const MatrixXd& points);

std::vector<std::string> coordinate_header(Index n);

/// Writes `header` then `rows` joined with commas.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace kreach
