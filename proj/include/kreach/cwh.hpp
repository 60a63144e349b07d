#pragma once

#include <Eigen/Core>

namespace kreach {

using Matrix4d = Eigen::Matrix4d;
using Matrix42d = Eigen::Matrix<double, 4, 2>;
using Vector4d = Eigen::Vector4d;
using Vector2d = Eigen::Vector2d;

/// Bound on each thrust component, |F| <= kCwhInputBound.
inline constexpr double kCwhInputBound = 0.1;

struct CwhMatrices {
  Matrix4d a;
  Matrix42d b;
};

/// Exact zero-order-hold discretization of the Clohessy-Wiltshire-Hill
/// equations with state (x, y, xdot, ydot) and thrust (Fx, Fy):
///
///   xddot - 3 w^2 x - 2 w ydot = Fx / m
///   yddot + 2 w xdot           = Fy / m
CwhMatrices cwh_discrete_matrices(double omega, double mass, double dt);

/// Continuous-time system matrix of the same equations.
Matrix4d cwh_continuous_matrix(double omega);

/// a * state + b * input + noise. Rejects inputs outside the thrust box.
Vector4d cwh_step(const CwhMatrices& m, const Vector4d& state, const Vector2d& input, const Vector4d& noise);

}  // namespace kreach
