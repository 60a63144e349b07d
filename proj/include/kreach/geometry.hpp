#pragma once

#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "kreach/estimator.hpp"
#include "kreach/kernel.hpp"
#include "kreach/types.hpp"

namespace kreach {

/// Two-dimensional cross-section through a model's state space. Node (a, b)
/// is `fixed` with coordinates dim_i and dim_j replaced by
///   range_i.first + a * (range_i.second - range_i.first) / (resolution_i - 1)
/// and likewise for j.
struct GridSpec {
  Index dim_i = 0;
  Index dim_j = 1;
  VectorXd fixed;
  std::pair<double, double> range_i{0.0, 1.0};
  std::pair<double, double> range_j{0.0, 1.0};
  Index resolution_i = 100;
  Index resolution_j = 100;

  void validate(Index state_dim) const;
  double coordinate_i(Index a) const;
  double coordinate_j(Index b) const;
  VectorXd node(Index a, Index b) const;
  /// All nodes, row index a * resolution_j + b.
  MatrixXd nodes() const;
};

/// F on every grid node; entry (a, b) is node(a, b).
MatrixXd grid_decision_values(const SupportModel& model, const GridSpec& grid);

struct Segment {
  Eigen::Vector2d a;
  Eigen::Vector2d b;
};

struct ContourSet {
  std::vector<Segment> segments;
  double level = 0.0;
};

/// Marching squares over `values` (laid out as grid_decision_values) at
/// `level`. A node equal to the level counts as inside. Saddle cells are
/// resolved by comparing the mean of the four corners with the level.
ContourSet extract_contour(const MatrixXd& values, const GridSpec& grid, double level);

// Point-cloud distances. Clouds hold one point per row.

struct EuclideanMetric {};
struct KernelInducedMetric {
  KernelSpec kernel;
};
using PointMetric = std::variant<EuclideanMetric, KernelInducedMetric>;

double point_distance(const PointMetric& metric, const Eigen::Ref<const VectorXd>& x,
                      const Eigen::Ref<const VectorXd>& y);

/// max over a in A of min over b in B of d(a, b).
double directed_hausdorff(const MatrixXd& a, const MatrixXd& b, const PointMetric& metric = EuclideanMetric{});
/// max(directed(A, B), directed(B, A)).
double hausdorff(const MatrixXd& a, const MatrixXd& b, const PointMetric& metric = EuclideanMetric{});

/// Fraction of rows of `fresh` classified inside.
double containment_rate(const SupportModel& model, const MatrixXd& fresh);

// Area comparisons on a two-dimensional midpoint grid.

/// Square cells of side (hi - lo) / resolution over [lo_x, hi_x] x [lo_y, hi_y];
/// samples are taken at cell centers.
struct AreaGrid {
  double lo_x = -1.5;
  double hi_x = 1.5;
  double lo_y = -1.5;
  double hi_y = 1.5;
  Index resolution = 200;

  void validate() const;
  double cell_area() const;
  MatrixXd centers() const;  // resolution^2 x 2, row index a * resolution + b
};

using Indicator = Eigen::Array<bool, Eigen::Dynamic, 1>;

Indicator indicator(const std::function<bool(const Eigen::Vector2d&)>& region, const AreaGrid& grid);
Indicator indicator(const SupportModel& model, const AreaGrid& grid);

/// Area of the cells where the two indicators disagree.
double symmetric_difference_area(const Indicator& a, const Indicator& b, const AreaGrid& grid);

}  // namespace kreach
