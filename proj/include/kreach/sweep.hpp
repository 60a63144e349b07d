#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "kreach/estimator.hpp"
#include "kreach/geometry.hpp"
#include "kreach/system.hpp"

namespace kreach {

/// Draws M points with the given seed.
using SampleGenerator = std::function<SampleSet(Index sample_size, std::uint64_t seed)>;

SampleGenerator system_generator(SystemConfig config);
/// Uniform on the disk of `radius` about `center`.
SampleGenerator uniform_disk_generator(Eigen::Vector2d center = Eigen::Vector2d::Zero(), double radius = 1.0);

struct SweepOptions {
  KernelSpec kernel;
  /// Known region for two-dimensional data; enables the area comparison.
  std::function<bool(const Eigen::Vector2d&)> truth;
  AreaGrid area;
  /// Size of the fresh sample compared against the training cloud.
  Index fresh_size = 1000;
};

struct SweepRow {
  Index sample_size = 0;
  std::uint64_t seed = 0;
  double tau = 0.0;
  std::optional<double> sym_diff_area;
  double hausdorff = 0.0;  // fresh sample vs. training cloud, kernel metric
};

/// Seed used for the fresh comparison sample of a sweep entry.
std::uint64_t fresh_sample_seed(std::uint64_t seed);

/// One row per (M, seed), ordered by M then by position in `seeds`. Each
/// entry fits with lambda = 1/M.
std::vector<SweepRow> convergence_sweep(const SampleGenerator& generator, const std::vector<Index>& sample_sizes,
                                        const std::vector<std::uint64_t>& seeds, const SweepOptions& options);

}  // namespace kreach
