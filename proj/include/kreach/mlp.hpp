#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kreach/types.hpp"

namespace kreach {

enum class Activation { ReLU, Tanh, Sigmoid, Linear };

std::string_view to_string(Activation activation);
Activation parse_activation(std::string_view name);

struct DenseLayer {
  MatrixXd weights;  // rows = outputs, cols = inputs
  VectorXd bias;
  Activation activation = Activation::Linear;
};

struct OutputBox {
  VectorXd lo;
  VectorXd hi;
};

/// Feed-forward controller: affine map then activation per layer, with an
/// optional clamp of the final output to a box.
class MlpController {
 public:
  MlpController(std::vector<DenseLayer> layers, std::optional<OutputBox> saturation = std::nullopt);

  Index input_dim() const { return layers_.front().weights.cols(); }
  Index output_dim() const { return layers_.back().weights.rows(); }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  const std::optional<OutputBox>& saturation() const { return saturation_; }

  VectorXd forward(const VectorXd& state) const;

 private:
  std::vector<DenseLayer> layers_;
  std::optional<OutputBox> saturation_;
};

inline VectorXd mlp_forward(const MlpController& controller, const VectorXd& state) {
  return controller.forward(state);
}

/// Weight file:
///   {input_dim, output_dim,
///    layers: [{weights: row-major array, rows, cols, bias: array, activation}],
///    saturation: optional {lo: array, hi: array}}
MlpController mlp_from_json(const std::string& text);
MlpController load_mlp(const std::filesystem::path& path);

}  // namespace kreach
