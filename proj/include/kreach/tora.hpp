#pragma once

#include <string>

#include "kreach/error.hpp"
#include "kreach/types.hpp"

namespace kreach {

/// TORA vector field (x2, -x1 + 0.1 sin x3, x4, u).
Eigen::Vector4d tora_derivative(const Eigen::Vector4d& state, double u);

/// One classical fourth-order Runge-Kutta step of xdot = f(x, u) with u held.
template <typename Field, typename Derived, typename Input>
typename Derived::PlainObject rk4_step(Field&& f, const Eigen::MatrixBase<Derived>& x_in, const Input& u, double h) {
  using State = typename Derived::PlainObject;
  if (!(h > 0.0)) throw ValidationError("RK4 step size must be positive");
  const State x = x_in;
  const State k1 = f(x, u);
  const State k2 = f(State(x + (0.5 * h) * k1), u);
  const State k3 = f(State(x + (0.5 * h) * k2), u);
  const State k4 = f(State(x + h * k3), u);
  State next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite()) throw NumericalError("RK4 step produced a non-finite state");
  return next;
}

/// Saturated linear feedback u = clamp(-k1 x3 - k2 x4, [-saturation, saturation]).
struct ToraFeedback {
  double k1 = 1.0;
  double k2 = 1.0;
  double saturation = 1.0;

  double operator()(const Eigen::Vector4d& state) const;
};

}  // namespace kreach
