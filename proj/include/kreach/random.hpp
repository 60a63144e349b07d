#pragma once

#include <cstdint>
#include <random>

#include "kreach/types.hpp"

namespace kreach {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Seed of stream `index` under `master`:
///   mix64(mix64(master) + (index + 1) * 0x9E3779B97F4A7C15).
/// Streams are independent of the order in which they are consumed.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t index);

/// Seeded random stream. All variates are produced by portable algorithms on
/// top of mt19937_64, so a seed reproduces the same draws on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via the Marsaglia polar method.
  double normal();
  /// Gamma(shape, 1) via Marsaglia-Tsang; shapes below 1 use the
  /// Gamma(shape + 1) * U^(1/shape) boost.
  double gamma(double shape);
  /// Beta(alpha, beta) as g1 / (g1 + g2) with independent gamma draws.
  double beta(double alpha, double beta);

 private:
  std::mt19937_64 engine_;
};

/// mean + sqrt(variance) .* z with z standard normal, per coordinate.
VectorXd sample_gaussian(const VectorXd& mean, const VectorXd& variance, Rng& rng);

/// scale * Beta(alpha, beta).
double sample_scaled_beta(double alpha, double beta, double scale, Rng& rng);

}  // namespace kreach
