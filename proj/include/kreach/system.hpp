#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kreach/cwh.hpp"
#include "kreach/estimator.hpp"
#include "kreach/mlp.hpp"
#include "kreach/random.hpp"
#include "kreach/tora.hpp"
#include "kreach/types.hpp"

namespace kreach {

// Disturbances, added once per discrete step.

struct NoDisturbance {};

struct GaussianDisturbance {
  VectorXd mean;
  VectorXd variance;  // diagonal of the covariance
};

/// scale * Beta(alpha, beta) drawn independently for each of `dims`
/// coordinates. Coordinates with a false mask entry receive zero.
struct ScaledBetaDisturbance {
  double alpha = 2.0;
  double beta = 0.5;
  double scale = 0.01;
  Index dims = 4;
  std::vector<bool> mask;  // empty = all coordinates
};

using DisturbanceSpec = std::variant<NoDisturbance, GaussianDisturbance, ScaledBetaDisturbance>;

/// Dimension of the disturbance vector, or nullopt for none.
std::optional<Index> disturbance_dim(const DisturbanceSpec& spec);
void validate_disturbance(const DisturbanceSpec& spec);
/// One draw; a zero vector of length `state_dim` for NoDisturbance.
VectorXd sample_disturbance(const DisturbanceSpec& spec, Index state_dim, Rng& rng);

// Initial conditions.

struct InitialPoint {
  VectorXd x;
};

struct InitialBox {
  VectorXd lo;
  VectorXd hi;
};

using InitialSpec = std::variant<InitialPoint, InitialBox>;

VectorXd sample_initial(const InitialSpec& spec, Rng& rng);

// Dynamics.

/// CWH spacecraft relative motion driven by an open-loop thrust sequence.
struct CwhSystem {
  double omega = 0.00113;  // rad/s
  double mass = 300.0;     // kg
  double dt = 20.0;        // s
  std::vector<Eigen::Vector2d> inputs;
};

/// TORA closed loop under a feed-forward network or the built-in feedback.
struct ToraSystem {
  std::variant<ToraFeedback, MlpController> controller = ToraFeedback{};
  double control_period = 0.1;  // s
  Index substeps = 10;
};

/// Terminal states read from a CSV file rather than simulated.
struct ExternalSamples {
  std::filesystem::path path;
};

/// User-supplied discrete dynamics x_{k+1} = step(x_k, k), before disturbance.
struct CustomDynamics {
  Index state_dim = 0;
  std::function<VectorXd(const VectorXd&, Index)> step;
};

using SystemKind = std::variant<CwhSystem, ToraSystem, ExternalSamples, CustomDynamics>;

struct SystemConfig {
  SystemKind kind;
  Index horizon = 1;
  DisturbanceSpec disturbance = NoDisturbance{};
  InitialSpec initial = InitialPoint{};

  Index state_dim() const;
  void validate() const;
};

/// Small constant thrust toward the origin, repeated `horizon` times.
std::vector<Eigen::Vector2d> default_cwh_inputs(const Eigen::Vector2d& start_position, Index horizon);

/// States x_0 .. x_N. Deterministic in (config, x0, seed).
std::vector<VectorXd> simulate_trajectory(const SystemConfig& config, const VectorXd& x0, std::uint64_t seed);

/// M terminal states. Stream i draws its initial state with seed
/// child_seed(s_i, 0) and simulates with seed child_seed(s_i, 1), where
/// s_i = child_seed(master_seed, i). For ExternalSamples the first M rows of
/// the file are returned.
SampleSet sample_terminal_states(const SystemConfig& config, Index sample_size, std::uint64_t master_seed);

}  // namespace kreach
