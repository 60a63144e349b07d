#include "kreach/random.hpp"

#include <cmath>
#include <string>

#include "kreach/error.hpp"

namespace kreach {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

double Rng::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  for (;;) {
    const double u = 2.0 * uniform() - 1.0;
    const double v = 2.0 * uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw ValidationError("gamma shape must be positive, got " + std::to_string(shape));
  }
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::beta(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw ValidationError("beta shape parameters must be positive");
  }
  for (;;) {
    const double g1 = gamma(alpha);
    const double g2 = gamma(beta);
    const double sum = g1 + g2;
    // Both shapes tiny can underflow to 0/0.
    if (sum > 0.0) return g1 / sum;
  }
}

VectorXd sample_gaussian(const VectorXd& mean, const VectorXd& variance, Rng& rng) {
  if (mean.size() != variance.size()) {
    throw ValidationError("gaussian mean and variance differ in dimension");
  }
  VectorXd out(mean.size());
  for (Index i = 0; i < mean.size(); ++i) {
    if (!(variance(i) >= 0.0) || !std::isfinite(variance(i))) {
      throw ValidationError("gaussian variance must be nonnegative, got " + std::to_string(variance(i)));
    }
    out(i) = mean(i) + std::sqrt(variance(i)) * rng.normal();
  }
  return out;
}

double sample_scaled_beta(double alpha, double beta, double scale, Rng& rng) {
  if (!std::isfinite(scale)) throw ValidationError("beta scale must be finite");
  return scale * rng.beta(alpha, beta);
}

}  // namespace kreach
