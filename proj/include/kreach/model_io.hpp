#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "kreach/estimator.hpp"

namespace kreach {

inline constexpr int kModelFormatVersion = 1;

/// FNV-1a 64 over the IEEE-754 bit patterns of the support values (row-major,
/// little-endian bytes), rendered as 16 lowercase hex digits.
std::string support_checksum(const MatrixXd& support);

/// Model document:
///   {format_version, kernel_family, bandwidth, lambda, tau, m, n,
///    support: [row-major M*n numbers], checksum}
/// Numbers are written as shortest round-trip decimals. The Cholesky factor is
/// not stored; it is recomputed on load.
std::string model_to_json(const SupportModel& model);
SupportModel model_from_json(const std::string& text);

void save_model(const SupportModel& model, const std::filesystem::path& path);
SupportModel load_model(const std::filesystem::path& path);

}  // namespace kreach
