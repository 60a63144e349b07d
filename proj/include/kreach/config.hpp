#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kreach/estimator.hpp"
#include "kreach/geometry.hpp"
#include "kreach/sweep.hpp"
#include "kreach/system.hpp"

namespace kreach {

/// Synthetic source: uniform on a disk. Its support is known exactly, so
/// sweeps over it can report the symmetric-difference area.
struct DiskSource {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 1.0;
};

struct SweepSettings {
  std::vector<Index> sizes;
  std::vector<std::uint64_t> seeds;
  Index fresh_size = 1000;
  AreaGrid area;
};

/// One experiment, read from a JSON document:
///
///   {
///     "system": {"type": "cwh" | "tora" | "external" | "uniform-disk", ...},
///     "horizon": N, "disturbance": {...}, "initial": {...},
///     "sample_size": M, "seed": s,
///     "fit": {"kernel": "abel", "sigma": 0.1, "lambda": "reciprocal-m" | value},
///     "grid": {...}, "sweep": {...}
///   }
///
/// See README.md for every field.
struct RunConfig {
  std::variant<SystemConfig, DiskSource> source;
  FitConfig fit;
  std::optional<GridSpec> grid;
  Index sample_size = 1;
  std::uint64_t seed = 0;
  SweepSettings sweep;

  SampleGenerator generator() const;
  /// Membership in the exact support, when it is known.
  std::function<bool(const Eigen::Vector2d&)> truth() const;
  SampleSet sample() const { return generator()(sample_size, seed); }
};

/// Relative paths inside the document resolve against `base_dir`.
RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Grid document: {dim_i, dim_j, fixed?, range_i | half_width_i, range_j |
/// half_width_j, resolution_i, resolution_j} (or a single "resolution").
/// Without "fixed" the grid is centered on `default_center`; half widths are
/// measured from the center.
GridSpec parse_grid(const std::string& text, const VectorXd& default_center);
GridSpec load_grid(const std::filesystem::path& path, const VectorXd& default_center);
std::string grid_to_json(const GridSpec& grid);

LambdaRule parse_lambda_rule(const std::string& text);

}  // namespace kreach
