#include "kreach/mlp.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kreach/error.hpp"

namespace kreach {

std::string_view to_string(Activation activation) {
  switch (activation) {
    case Activation::ReLU:
      return "relu";
    case Activation::Tanh:
      return "tanh";
    case Activation::Sigmoid:
      return "sigmoid";
    case Activation::Linear:
      return "linear";
  }
  return "unknown";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::ReLU;
  if (name == "tanh") return Activation::Tanh;
  if (name == "sigmoid") return Activation::Sigmoid;
  if (name == "linear") return Activation::Linear;
  throw ValidationError("unknown activation '" + std::string(name) + "'");
}

MlpController::MlpController(std::vector<DenseLayer> layers, std::optional<OutputBox> saturation)
    : layers_(std::move(layers)), saturation_(std::move(saturation)) {
  if (layers_.empty()) throw ValidationError("controller has no layers");
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const auto& layer = layers_[k];
    const std::string where = "layer " + std::to_string(k);
    if (layer.weights.rows() < 1 || layer.weights.cols() < 1) throw ValidationError(where + ": empty weights");
    if (layer.bias.size() != layer.weights.rows()) {
      throw ValidationError(where + ": bias length " + std::to_string(layer.bias.size()) +
                            " does not match " + std::to_string(layer.weights.rows()) + " outputs");
    }
    if (k > 0 && layer.weights.cols() != layers_[k - 1].weights.rows()) {
      throw ValidationError(where + ": consumes " + std::to_string(layer.weights.cols()) +
                            " inputs but the previous layer produces " +
                            std::to_string(layers_[k - 1].weights.rows()));
    }
  }
  if (saturation_) {
    if (saturation_->lo.size() != output_dim() || saturation_->hi.size() != output_dim()) {
      throw ValidationError("saturation box dimension does not match controller output");
    }
    if ((saturation_->lo.array() > saturation_->hi.array()).any()) {
      throw ValidationError("saturation box has lo > hi");
    }
  }
}

VectorXd MlpController::forward(const VectorXd& state) const {
  if (state.size() != input_dim()) {
    throw ValidationError("controller input has dimension " + std::to_string(state.size()) + ", expected " +
                          std::to_string(input_dim()));
  }
  if (!state.allFinite()) throw ValidationError("controller input is not finite");

  VectorXd z = state;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const auto& layer = layers_[k];
    VectorXd a = layer.weights * z + layer.bias;
    switch (layer.activation) {
      case Activation::ReLU:
        a = a.cwiseMax(0.0);
        break;
      case Activation::Tanh:
        a = a.array().tanh();
        break;
      case Activation::Sigmoid:
        a = (1.0 + (-a.array()).exp()).inverse();
        break;
      case Activation::Linear:
        break;
    }
    if (!a.allFinite()) throw NumericalError("controller produced a non-finite value at layer " + std::to_string(k));
    z = std::move(a);
  }
  if (saturation_) z = z.cwiseMax(saturation_->lo).cwiseMin(saturation_->hi);
  return z;
}

namespace {

using nlohmann::json;

VectorXd to_vector(const json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError(what + " must be an array");
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const VectorXd>(values.data(), static_cast<Index>(values.size()));
}

}  // namespace

MlpController mlp_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("controller file: ") + e.what());
  }
  try {
    std::vector<DenseLayer> layers;
    const auto& jl = doc.at("layers");
    for (std::size_t k = 0; k < jl.size(); ++k) {
      const auto& l = jl[k];
      const std::string where = "controller layers[" + std::to_string(k) + "]";
      const auto rows = l.at("rows").get<Index>();
      const auto cols = l.at("cols").get<Index>();
      const auto w = l.at("weights").get<std::vector<double>>();
      if (rows < 1 || cols < 1 || static_cast<Index>(w.size()) != rows * cols) {
        throw ValidationError(where + ": weights must hold rows*cols values");
      }
      DenseLayer layer;
      layer.weights = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          w.data(), rows, cols);
      layer.bias = to_vector(l.at("bias"), where + ".bias");
      layer.activation = parse_activation(l.value("activation", std::string("linear")));
      layers.push_back(std::move(layer));
    }
    std::optional<OutputBox> box;
    if (doc.contains("saturation") && !doc["saturation"].is_null()) {
      box = OutputBox{to_vector(doc["saturation"].at("lo"), "saturation.lo"),
                      to_vector(doc["saturation"].at("hi"), "saturation.hi")};
    }
    MlpController controller(std::move(layers), std::move(box));
    if (controller.input_dim() != doc.at("input_dim").get<Index>() ||
        controller.output_dim() != doc.at("output_dim").get<Index>()) {
      throw ValidationError("controller input_dim/output_dim do not match the layer shapes");
    }
    return controller;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("controller file: ") + e.what());
  }
}

MlpController load_mlp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open controller file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return mlp_from_json(buf.str());
}

}  // namespace kreach
