#include "kreach/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "kreach/error.hpp"

namespace kreach {

void GridSpec::validate(Index state_dim) const {
  if (dim_i < 0 || dim_i >= state_dim || dim_j < 0 || dim_j >= state_dim) {
    throw ValidationError("grid coordinate index out of range for dimension " + std::to_string(state_dim));
  }
  if (dim_i == dim_j) throw ValidationError("grid dim_i and dim_j must differ");
  if (fixed.size() != state_dim) {
    throw ValidationError("grid fixed vector has dimension " + std::to_string(fixed.size()) + ", expected " +
                          std::to_string(state_dim));
  }
  if (!fixed.allFinite()) throw ValidationError("grid fixed vector is not finite");
  if (resolution_i < 2 || resolution_j < 2) throw ValidationError("grid resolutions must be at least 2");
  for (const auto& r : {range_i, range_j}) {
    if (!std::isfinite(r.first) || !std::isfinite(r.second) || !(r.first < r.second)) {
      throw ValidationError("grid ranges must be finite with lo < hi");
    }
  }
}

double GridSpec::coordinate_i(Index a) const {
  return range_i.first + static_cast<double>(a) * (range_i.second - range_i.first) / static_cast<double>(resolution_i - 1);
}

double GridSpec::coordinate_j(Index b) const {
  return range_j.first + static_cast<double>(b) * (range_j.second - range_j.first) / static_cast<double>(resolution_j - 1);
}

VectorXd GridSpec::node(Index a, Index b) const {
  VectorXd x = fixed;
  x(dim_i) = coordinate_i(a);
  x(dim_j) = coordinate_j(b);
  return x;
}

MatrixXd GridSpec::nodes() const {
  MatrixXd out(resolution_i * resolution_j, fixed.size());
  for (Index a = 0; a < resolution_i; ++a) {
    for (Index b = 0; b < resolution_j; ++b) out.row(a * resolution_j + b) = node(a, b).transpose();
  }
  return out;
}

MatrixXd grid_decision_values(const SupportModel& model, const GridSpec& grid) {
  grid.validate(model.dim());
  const VectorXd flat = model.decision_values(grid.nodes());
  MatrixXd values(grid.resolution_i, grid.resolution_j);
  for (Index a = 0; a < grid.resolution_i; ++a) {
    for (Index b = 0; b < grid.resolution_j; ++b) values(a, b) = flat(a * grid.resolution_j + b);
  }
  return values;
}

ContourSet extract_contour(const MatrixXd& values, const GridSpec& grid, double level) {
  if (values.rows() != grid.resolution_i || values.cols() != grid.resolution_j) {
    throw ValidationError("contour values do not match the grid resolution");
  }
  if (!values.allFinite()) throw ValidationError("contour values must be finite");

  ContourSet out;
  out.level = level;

  // Corners counter-clockwise from (a, b); edge e joins corner e and e + 1.
  constexpr std::array<std::array<int, 2>, 4> offset{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};

  for (Index a = 0; a + 1 < grid.resolution_i; ++a) {
    for (Index b = 0; b + 1 < grid.resolution_j; ++b) {
      std::array<double, 4> v{};
      std::array<Eigen::Vector2d, 4> p;
      std::array<bool, 4> inside{};
      for (int k = 0; k < 4; ++k) {
        const Index ca = a + offset[k][0];
        const Index cb = b + offset[k][1];
        v[k] = values(ca, cb);
        p[k] = {grid.coordinate_i(ca), grid.coordinate_j(cb)};
        inside[k] = v[k] >= level;
      }

      const auto crossing = [&](int e) -> Eigen::Vector2d {
        // Edges 2 and 3 run backwards; interpolate from the lower node so
        // neighbouring cells produce bit-identical shared endpoints.
        const int k0 = e < 2 ? e : (e + 1) % 4;
        const int k1 = e < 2 ? e + 1 : e;
        const double t = (level - v[k0]) / (v[k1] - v[k0]);
        return p[k0] + t * (p[k1] - p[k0]);
      };
      const auto crosses = [&](int e) { return inside[e] != inside[(e + 1) % 4]; };

      std::array<int, 4> edges{};
      int count = 0;
      for (int e = 0; e < 4; ++e) {
        if (crosses(e)) edges[count++] = e;
      }
      if (count == 2) {
        out.segments.push_back({crossing(edges[0]), crossing(edges[1])});
      } else if (count == 4) {
        // Saddle: cut off each corner whose status differs from the center's.
        const bool center_inside = 0.25 * (v[0] + v[1] + v[2] + v[3]) >= level;
        for (int k = 0; k < 4; ++k) {
          if (inside[k] != center_inside) out.segments.push_back({crossing((k + 3) % 4), crossing(k)});
        }
      }
    }
  }
  return out;
}

double point_distance(const PointMetric& metric, const Eigen::Ref<const VectorXd>& x,
                      const Eigen::Ref<const VectorXd>& y) {
  if (const auto* km = std::get_if<KernelInducedMetric>(&metric)) return kernel_metric(km->kernel, x, y);
  if (x.size() != y.size()) throw ValidationError("points differ in dimension");
  return std::sqrt(detail::squared_distance(x, y));
}

namespace {

void check_clouds(const MatrixXd& a, const MatrixXd& b) {
  if (a.rows() == 0 || b.rows() == 0) throw ValidationError("Hausdorff distance of an empty point cloud");
  if (a.cols() != b.cols()) throw ValidationError("point clouds differ in dimension");
  require_finite(a, "point cloud");
  require_finite(b, "point cloud");
}

double directed_unchecked(const MatrixXd& a, const MatrixXd& b, const PointMetric& metric) {
  const auto* km = std::get_if<KernelInducedMetric>(&metric);
  double worst = 0.0;
  for (Index i = 0; i < a.rows(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < b.rows(); ++j) {
      const double sq = detail::squared_distance(a.row(i), b.row(j));
      const double d = km ? std::sqrt(std::max(0.0, 2.0 - 2.0 * detail::kernel_from_squared_distance(km->kernel, sq)))
                          : std::sqrt(sq);
      nearest = std::min(nearest, d);
      // Cannot raise the running maximum any more.
      if (nearest <= worst) break;
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

}  // namespace

double directed_hausdorff(const MatrixXd& a, const MatrixXd& b, const PointMetric& metric) {
  check_clouds(a, b);
  if (const auto* km = std::get_if<KernelInducedMetric>(&metric)) km->kernel.validate();
  return directed_unchecked(a, b, metric);
}

double hausdorff(const MatrixXd& a, const MatrixXd& b, const PointMetric& metric) {
  check_clouds(a, b);
  if (const auto* km = std::get_if<KernelInducedMetric>(&metric)) km->kernel.validate();
  return std::max(directed_unchecked(a, b, metric), directed_unchecked(b, a, metric));
}

double containment_rate(const SupportModel& model, const MatrixXd& fresh) {
  if (fresh.rows() == 0) throw ValidationError("containment rate of an empty point cloud");
  const auto labels = model.classify_batch(fresh);
  const auto inside = std::count(labels.begin(), labels.end(), Membership::Inside);
  return static_cast<double>(inside) / static_cast<double>(labels.size());
}

void AreaGrid::validate() const {
  if (resolution < 1) throw ValidationError("area grid resolution must be positive");
  if (!(lo_x < hi_x) || !(lo_y < hi_y)) throw ValidationError("area grid ranges must have lo < hi");
}

double AreaGrid::cell_area() const {
  return (hi_x - lo_x) / static_cast<double>(resolution) * (hi_y - lo_y) / static_cast<double>(resolution);
}

MatrixXd AreaGrid::centers() const {
  validate();
  const double hx = (hi_x - lo_x) / static_cast<double>(resolution);
  const double hy = (hi_y - lo_y) / static_cast<double>(resolution);
  MatrixXd out(resolution * resolution, 2);
  for (Index a = 0; a < resolution; ++a) {
    for (Index b = 0; b < resolution; ++b) {
      out(a * resolution + b, 0) = lo_x + (static_cast<double>(a) + 0.5) * hx;
      out(a * resolution + b, 1) = lo_y + (static_cast<double>(b) + 0.5) * hy;
    }
  }
  return out;
}

Indicator indicator(const std::function<bool(const Eigen::Vector2d&)>& region, const AreaGrid& grid) {
  const MatrixXd c = grid.centers();
  Indicator out(c.rows());
  for (Index i = 0; i < c.rows(); ++i) out(i) = region(c.row(i).transpose());
  return out;
}

Indicator indicator(const SupportModel& model, const AreaGrid& grid) {
  if (model.dim() != 2) throw ValidationError("area indicators need a two-dimensional model");
  const auto labels = model.classify_batch(grid.centers());
  Indicator out(static_cast<Index>(labels.size()));
  for (Index i = 0; i < out.size(); ++i) out(i) = labels[static_cast<std::size_t>(i)] == Membership::Inside;
  return out;
}

double symmetric_difference_area(const Indicator& a, const Indicator& b, const AreaGrid& grid) {
  grid.validate();
  if (a.size() != grid.resolution * grid.resolution || b.size() != a.size()) {
    throw ValidationError("indicators do not match the area grid");
  }
  const auto disagree = (a != b).count();
  return static_cast<double>(disagree) * grid.cell_area();
}

}  // namespace kreach
