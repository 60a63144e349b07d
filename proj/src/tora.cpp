#include "kreach/tora.hpp"

#include <algorithm>
#include <cmath>

namespace kreach {

Eigen::Vector4d tora_derivative(const Eigen::Vector4d& state, double u) {
  if (!state.allFinite() || !std::isfinite(u)) throw ValidationError("TORA state or input is not finite");
  return {state(1), -state(0) + 0.1 * std::sin(state(2)), state(3), u};
}

double ToraFeedback::operator()(const Eigen::Vector4d& state) const {
  return std::clamp(-k1 * state(2) - k2 * state(3), -saturation, saturation);
}

}  // namespace kreach
