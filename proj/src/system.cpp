#include "kreach/system.hpp"

#include <cmath>
#include <sstream>

#include "kreach/csv.hpp"
#include "kreach/error.hpp"
#include "kreach/parallel.hpp"

namespace kreach {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

std::optional<Index> disturbance_dim(const DisturbanceSpec& spec) {
  return std::visit(overloaded{
                        [](const NoDisturbance&) -> std::optional<Index> { return std::nullopt; },
                        [](const GaussianDisturbance& g) -> std::optional<Index> { return g.mean.size(); },
                        [](const ScaledBetaDisturbance& b) -> std::optional<Index> { return b.dims; },
                    },
                    spec);
}

void validate_disturbance(const DisturbanceSpec& spec) {
  std::visit(overloaded{
                 [](const NoDisturbance&) {},
                 [](const GaussianDisturbance& g) {
                   if (g.mean.size() != g.variance.size()) {
                     throw ValidationError("gaussian disturbance: mean and variance differ in length");
                   }
                   if (!g.mean.allFinite()) throw ValidationError("gaussian disturbance: mean is not finite");
                   for (Index i = 0; i < g.variance.size(); ++i) {
                     if (!(g.variance(i) >= 0.0) || !std::isfinite(g.variance(i))) {
                       throw ValidationError("gaussian disturbance: variance must be nonnegative");
                     }
                   }
                 },
                 [](const ScaledBetaDisturbance& b) {
                   if (!(b.alpha > 0.0) || !(b.beta > 0.0)) {
                     throw ValidationError("beta disturbance: alpha and beta must be positive");
                   }
                   if (!std::isfinite(b.scale)) throw ValidationError("beta disturbance: scale must be finite");
                   if (b.dims < 1) throw ValidationError("beta disturbance: dims must be positive");
                   if (!b.mask.empty() && static_cast<Index>(b.mask.size()) != b.dims) {
                     throw ValidationError("beta disturbance: mask length must equal dims");
                   }
                 },
             },
             spec);
}

VectorXd sample_disturbance(const DisturbanceSpec& spec, Index state_dim, Rng& rng) {
  return std::visit(overloaded{
                        [&](const NoDisturbance&) -> VectorXd { return VectorXd::Zero(state_dim); },
                        [&](const GaussianDisturbance& g) -> VectorXd { return sample_gaussian(g.mean, g.variance, rng); },
                        [&](const ScaledBetaDisturbance& b) -> VectorXd {
                          VectorXd w(b.dims);
                          for (Index i = 0; i < b.dims; ++i) {
                            // Masked coordinates still consume a draw so the
                            // stream layout does not depend on the mask.
                            const double v = sample_scaled_beta(b.alpha, b.beta, b.scale, rng);
                            w(i) = (b.mask.empty() || b.mask[static_cast<std::size_t>(i)]) ? v : 0.0;
                          }
                          return w;
                        },
                    },
                    spec);
}

VectorXd sample_initial(const InitialSpec& spec, Rng& rng) {
  return std::visit(overloaded{
                        [](const InitialPoint& p) -> VectorXd { return p.x; },
                        [&](const InitialBox& b) -> VectorXd {
                          VectorXd x(b.lo.size());
                          for (Index i = 0; i < x.size(); ++i) x(i) = rng.uniform(b.lo(i), b.hi(i));
                          return x;
                        },
                    },
                    spec);
}

Index SystemConfig::state_dim() const {
  return std::visit(overloaded{
                        [](const CwhSystem&) -> Index { return 4; },
                        [](const ToraSystem&) -> Index { return 4; },
                        [](const ExternalSamples&) -> Index { return 0; },
                        [](const CustomDynamics& c) -> Index { return c.state_dim; },
                    },
                    kind);
}

void SystemConfig::validate() const {
  if (horizon < 1) throw ValidationError("horizon must be at least 1");
  validate_disturbance(disturbance);

  std::visit(overloaded{
                 [&](const CwhSystem& c) {
                   if (!(c.omega > 0.0)) throw ValidationError("cwh: omega must be positive");
                   if (!(c.mass > 0.0)) throw ValidationError("cwh: mass must be positive");
                   if (!(c.dt > 0.0)) throw ValidationError("cwh: dt must be positive");
                   if (static_cast<Index>(c.inputs.size()) < horizon) {
                     throw ValidationError("cwh: input sequence has " + std::to_string(c.inputs.size()) +
                                           " entries but the horizon is " + std::to_string(horizon));
                   }
                   for (std::size_t k = 0; k < c.inputs.size(); ++k) {
                     if (!(c.inputs[k].cwiseAbs().maxCoeff() <= kCwhInputBound)) {
                       throw ValidationError("cwh: input " + std::to_string(k) + " lies outside [-0.1, 0.1]^2");
                     }
                   }
                 },
                 [](const ToraSystem& t) {
                   if (!(t.control_period > 0.0)) throw ValidationError("tora: control_period must be positive");
                   if (t.substeps < 1) throw ValidationError("tora: substeps must be at least 1");
                   if (const auto* mlp = std::get_if<MlpController>(&t.controller)) {
                     if (mlp->input_dim() != 4 || mlp->output_dim() != 1) {
                       throw ValidationError("tora: controller must map 4 states to 1 input");
                     }
                   }
                 },
                 [](const ExternalSamples& e) {
                   if (e.path.empty()) throw ValidationError("external: sample file path is empty");
                 },
                 [](const CustomDynamics& c) {
                   if (c.state_dim < 1 || !c.step) throw ValidationError("custom dynamics: missing step or dimension");
                 },
             },
             kind);

  if (std::holds_alternative<ExternalSamples>(kind)) return;

  const Index n = state_dim();
  if (const auto d = disturbance_dim(disturbance); d && *d != n) {
    throw ValidationError("disturbance dimension " + std::to_string(*d) + " does not match state dimension " +
                          std::to_string(n));
  }
  std::visit(overloaded{
                 [&](const InitialPoint& p) {
                   if (p.x.size() != n) throw ValidationError("initial point has the wrong dimension");
                   if (!p.x.allFinite()) throw ValidationError("initial point is not finite");
                 },
                 [&](const InitialBox& b) {
                   if (b.lo.size() != n || b.hi.size() != n) throw ValidationError("initial box has the wrong dimension");
                   if (!b.lo.allFinite() || !b.hi.allFinite()) throw ValidationError("initial box is not finite");
                   if ((b.lo.array() > b.hi.array()).any()) throw ValidationError("initial box has lo > hi");
                 },
             },
             initial);
}

std::vector<Eigen::Vector2d> default_cwh_inputs(const Eigen::Vector2d& start_position, Index horizon) {
  constexpr double magnitude = 0.01;
  Eigen::Vector2d u = Eigen::Vector2d::Zero();
  const double norm = start_position.norm();
  if (norm > 0.0) u = -magnitude * start_position / norm;
  return std::vector<Eigen::Vector2d>(static_cast<std::size_t>(std::max<Index>(horizon, 0)), u);
}

std::vector<VectorXd> simulate_trajectory(const SystemConfig& config, const VectorXd& x0, std::uint64_t seed) {
  config.validate();
  if (std::holds_alternative<ExternalSamples>(config.kind)) {
    throw ValidationError("external sample sources cannot be simulated");
  }
  const Index n = config.state_dim();
  if (x0.size() != n) {
    throw ValidationError("initial state has dimension " + std::to_string(x0.size()) + ", system expects " +
                          std::to_string(n));
  }
  if (!x0.allFinite()) throw ValidationError("initial state is not finite");

  Rng rng(seed);
  std::vector<VectorXd> traj;
  traj.reserve(static_cast<std::size_t>(config.horizon + 1));
  traj.push_back(x0);

  std::visit(overloaded{
                 [&](const CwhSystem& c) {
                   const CwhMatrices m = cwh_discrete_matrices(c.omega, c.mass, c.dt);
                   Vector4d x = x0;
                   for (Index k = 0; k < config.horizon; ++k) {
                     const Vector4d w = sample_disturbance(config.disturbance, 4, rng);
                     x = cwh_step(m, x, c.inputs[static_cast<std::size_t>(k)], w);
                     traj.emplace_back(x);
                   }
                 },
                 [&](const ToraSystem& t) {
                   const double h = t.control_period / static_cast<double>(t.substeps);
                   const auto field = [](const Vector4d& s, double u) { return tora_derivative(s, u); };
                   Vector4d x = x0;
                   for (Index k = 0; k < config.horizon; ++k) {
                     const double u = std::visit(overloaded{
                                                     [&](const ToraFeedback& fb) { return fb(x); },
                                                     [&](const MlpController& mlp) { return mlp.forward(x)(0); },
                                                 },
                                                 t.controller);
                     for (Index s = 0; s < t.substeps; ++s) x = rk4_step(field, x, u, h);
                     x += sample_disturbance(config.disturbance, 4, rng);
                     traj.emplace_back(x);
                   }
                 },
                 [](const ExternalSamples&) {},
                 [&](const CustomDynamics& c) {
                   VectorXd x = x0;
                   for (Index k = 0; k < config.horizon; ++k) {
                     VectorXd next = c.step(x, k);
                     if (next.size() != n) throw ValidationError("custom dynamics returned the wrong dimension");
                     next += sample_disturbance(config.disturbance, n, rng);
                     if (!next.allFinite()) throw NumericalError("custom dynamics produced a non-finite state");
                     x = std::move(next);
                     traj.push_back(x);
                   }
                 },
             },
             config.kind);
  return traj;
}

SampleSet sample_terminal_states(const SystemConfig& config, Index sample_size, std::uint64_t master_seed) {
  if (sample_size < 1) throw ValidationError("sample size must be at least 1");
  config.validate();

  if (const auto* ext = std::get_if<ExternalSamples>(&config.kind)) {
    const MatrixXd rows = read_points_csv(ext->path);
    if (rows.rows() < sample_size) {
      throw ValidationError("external sample file '" + ext->path.string() + "' has " + std::to_string(rows.rows()) +
                            " rows, fewer than the requested " + std::to_string(sample_size));
    }
    return SampleSet(rows.topRows(sample_size), "external:" + ext->path.string());
  }

  const Index n = config.state_dim();
  MatrixXd points(sample_size, n);
  detail::parallel_chunks(sample_size, 16, [&](Index begin, Index end) {
    for (Index i = begin; i < end; ++i) {
      const std::uint64_t stream = child_seed(master_seed, static_cast<std::uint64_t>(i));
      Rng init_rng(child_seed(stream, 0));
      const VectorXd x0 = sample_initial(config.initial, init_rng);
      const auto traj = simulate_trajectory(config, x0, child_seed(stream, 1));
      points.row(i) = traj.back().transpose();
    }
  });

  std::ostringstream provenance;
  provenance << "seed=" << master_seed << " horizon=" << config.horizon;
  return SampleSet(std::move(points), provenance.str());
}

}  // namespace kreach
