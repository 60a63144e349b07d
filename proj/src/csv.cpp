#include "kreach/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kreach/error.hpp"

namespace kreach {

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

MatrixXd read_points_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      n = split(line).size();
      break;
    }
  }
  if (n == 0) throw ValidationError(source + ": empty CSV (no header)");

  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    const std::string where = source + ":" + std::to_string(line_no) + " (row " + std::to_string(rows + 1) + ")";
    if (fields.size() != n) {
      throw ValidationError(where + ": expected " + std::to_string(n) + " columns, found " +
                            std::to_string(fields.size()));
    }
    for (const auto& f : fields) {
      double v = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        throw ValidationError(where + ": cannot parse '" + f + "' as a number");
      }
      if (!std::isfinite(v)) throw ValidationError(where + ": non-finite value '" + f + "'");
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw ValidationError(source + ": CSV has a header but no data rows");

  MatrixXd out(static_cast<Index>(rows), static_cast<Index>(n));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(static_cast<Index>(i), static_cast<Index>(j)) = values[i * n + j];
  }
  return out;
}

MatrixXd read_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_points_csv(in, path.string());
}

std::vector<std::string> coordinate_header(Index n) {
  std::vector<std::string> header;
  for (Index j = 0; j < n; ++j) header.push_back("x" + std::to_string(j + 1));
  return header;
}

void write_points_csv(std::ostream& out, const MatrixXd& points) {
  const auto header = coordinate_header(points.cols());
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (Index i = 0; i < points.rows(); ++i) {
    for (Index j = 0; j < points.cols(); ++j) out << (j ? "," : "") << format_double(points(i, j));
    out << '\n';
  }
}

void write_points_csv(const std::filesystem::path& path, const MatrixXd& points) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_points_csv(out, points);
  if (!out.flush()) throw IoError("failed writing '" + path.string() + "'");
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
    out << '\n';
  }
  if (!out.flush()) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace kreach
