#include "kreach/cwh.hpp"

#include <cmath>
#include <string>

#include "kreach/error.hpp"

namespace kreach {

CwhMatrices cwh_discrete_matrices(double omega, double mass, double dt) {
  if (!(omega > 0.0)) throw ValidationError("CWH omega must be positive");
  if (!(mass > 0.0)) throw ValidationError("CWH mass must be positive");
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw ValidationError("CWH dt must be nonnegative");

  const double w = omega;
  const double t = dt;
  const double s = std::sin(w * t);
  const double c = std::cos(w * t);

  CwhMatrices out;
  Matrix4d& a = out.a;
  a << 4.0 - 3.0 * c, 0.0, s / w, 2.0 * (1.0 - c) / w,
      6.0 * (s - w * t), 1.0, -2.0 * (1.0 - c) / w, (4.0 * s - 3.0 * w * t) / w,
      3.0 * w * s, 0.0, c, 2.0 * s,
      -6.0 * w * (1.0 - c), 0.0, -2.0 * s, 4.0 * c - 3.0;

  // Columns 3 and 4 of the transition matrix integrated over [0, dt].
  const double w2 = w * w;
  Matrix42d& b = out.b;
  b << (1.0 - c) / w2, 2.0 * (t - s / w) / w,
      -2.0 * (t - s / w) / w, 4.0 * (1.0 - c) / w2 - 1.5 * t * t,
      s / w, 2.0 * (1.0 - c) / w,
      -2.0 * (1.0 - c) / w, 4.0 * s / w - 3.0 * t;
  b /= mass;
  return out;
}

Matrix4d cwh_continuous_matrix(double omega) {
  const double w = omega;
  Matrix4d a;
  a << 0, 0, 1, 0,
      0, 0, 0, 1,
      3 * w * w, 0, 0, 2 * w,
      0, 0, -2 * w, 0;
  return a;
}

Vector4d cwh_step(const CwhMatrices& m, const Vector4d& state, const Vector2d& input, const Vector4d& noise) {
  for (int i = 0; i < 2; ++i) {
    if (!(std::abs(input(i)) <= kCwhInputBound)) {
      throw ValidationError("CWH input component " + std::to_string(i) + " = " + std::to_string(input(i)) +
                            " lies outside [-0.1, 0.1]");
    }
  }
  return m.a * state + m.b * input + noise;
}

}  // namespace kreach
