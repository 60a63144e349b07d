#include "kreach/sweep.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "kreach/error.hpp"
#include "kreach/random.hpp"

namespace kreach {

SampleGenerator system_generator(SystemConfig config) {
  config.validate();
  return [config = std::move(config)](Index m, std::uint64_t seed) { return sample_terminal_states(config, m, seed); };
}

SampleGenerator uniform_disk_generator(Eigen::Vector2d center, double radius) {
  if (!(radius > 0.0)) throw ValidationError("disk radius must be positive");
  return [center, radius](Index m, std::uint64_t seed) {
    if (m < 1) throw ValidationError("sample size must be at least 1");
    Rng rng(seed);
    MatrixXd points(m, 2);
    for (Index i = 0; i < m; ++i) {
      const double r = radius * std::sqrt(rng.uniform());
      const double theta = 2.0 * std::numbers::pi * rng.uniform();
      points(i, 0) = center(0) + r * std::cos(theta);
      points(i, 1) = center(1) + r * std::sin(theta);
    }
    std::ostringstream provenance;
    provenance << "uniform-disk seed=" << seed;
    return SampleSet(std::move(points), provenance.str());
  };
}

std::uint64_t fresh_sample_seed(std::uint64_t seed) { return child_seed(seed, 0xF4E5'11ULL); }

std::vector<SweepRow> convergence_sweep(const SampleGenerator& generator, const std::vector<Index>& sample_sizes,
                                        const std::vector<std::uint64_t>& seeds, const SweepOptions& options) {
  if (sample_sizes.empty() || seeds.empty()) throw ValidationError("sweep needs at least one size and one seed");
  for (std::size_t k = 0; k < sample_sizes.size(); ++k) {
    if (sample_sizes[k] < 1) throw ValidationError("sweep sample sizes must be positive");
    if (k > 0 && sample_sizes[k] < sample_sizes[k - 1]) throw ValidationError("sweep sample sizes must be ascending");
  }
  if (options.fresh_size < 1) throw ValidationError("sweep fresh sample size must be positive");
  options.kernel.validate();

  std::optional<Indicator> truth;
  if (options.truth) truth = indicator(options.truth, options.area);

  const FitConfig fit_config{options.kernel, LambdaRule::reciprocal_m()};
  std::vector<SweepRow> rows;
  for (const Index m : sample_sizes) {
    for (const std::uint64_t seed : seeds) {
      const SampleSet samples = generator(m, seed);
      const SupportModel model = SupportModel::fit(samples, fit_config);
      const SampleSet fresh = generator(options.fresh_size, fresh_sample_seed(seed));

      SweepRow row;
      row.sample_size = m;
      row.seed = seed;
      row.tau = model.decision_threshold();
      if (truth) row.sym_diff_area = symmetric_difference_area(indicator(model, options.area), *truth, options.area);
      row.hausdorff = hausdorff(fresh.points(), samples.points(), KernelInducedMetric{options.kernel});
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace kreach
