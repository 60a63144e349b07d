#include "kreach/model_io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kreach {

using nlohmann::json;

std::string support_checksum(const MatrixXd& support) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (Index i = 0; i < support.rows(); ++i) {
    for (Index j = 0; j < support.cols(); ++j) {
      const auto bits = std::bit_cast<std::uint64_t>(support(i, j));
      for (int b = 0; b < 8; ++b) {
        hash ^= (bits >> (8 * b)) & 0xffU;
        hash *= 0x100000001b3ULL;
      }
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string model_to_json(const SupportModel& model) {
  const MatrixXd& support = model.support();
  json support_values = json::array();
  for (Index i = 0; i < support.rows(); ++i) {
    for (Index j = 0; j < support.cols(); ++j) support_values.push_back(support(i, j));
  }
  json doc = {
      {"format_version", kModelFormatVersion},
      {"kernel_family", std::string(to_string(model.kernel().family))},
      {"bandwidth", model.kernel().bandwidth},
      {"lambda", model.lambda()},
      {"tau", model.decision_threshold()},
      {"m", support.rows()},
      {"n", support.cols()},
      {"support", std::move(support_values)},
      {"checksum", support_checksum(support)},
  };
  return doc.dump(1) + "\n";
}

namespace {

template <typename T>
T field(const json& doc, const char* name) {
  if (!doc.contains(name)) throw IoError(std::string("model file: missing field '") + name + "'");
  try {
    return doc.at(name).get<T>();
  } catch (const json::exception&) {
    throw IoError(std::string("model file: field '") + name + "' has the wrong type");
  }
}

}  // namespace

SupportModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("corrupt model file: ") + e.what());
  }
  if (!doc.is_object()) throw IoError("corrupt model file: top level is not an object");

  const int version = field<int>(doc, "format_version");
  if (version != kModelFormatVersion) {
    throw IoError("unsupported model format version " + std::to_string(version) + " (this build reads " +
                  std::to_string(kModelFormatVersion) + ")");
  }

  const auto m = field<Index>(doc, "m");
  const auto n = field<Index>(doc, "n");
  if (m < 1 || n < 1) throw IoError("corrupt model file: m and n must be positive");
  const auto values = field<std::vector<double>>(doc, "support");
  if (static_cast<Index>(values.size()) != m * n) {
    throw IoError("corrupt model file: support has " + std::to_string(values.size()) + " values, expected " +
                  std::to_string(m * n));
  }
  MatrixXd support(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) support(i, j) = values[static_cast<std::size_t>(i * n + j)];
  }
  if (support_checksum(support) != field<std::string>(doc, "checksum")) {
    throw IoError("model file checksum mismatch: support data is corrupt");
  }

  KernelSpec kernel;
  try {
    kernel = make_kernel(parse_kernel_family(field<std::string>(doc, "kernel_family")),
                         field<double>(doc, "bandwidth"));
  } catch (const ValidationError& e) {
    throw IoError(std::string("corrupt model file: ") + e.what());
  }
  const double lambda = field<double>(doc, "lambda");
  const double tau = field<double>(doc, "tau");
  if (!(lambda > 0.0) || !std::isfinite(tau)) throw IoError("corrupt model file: invalid lambda or tau");

  SupportModel model = SupportModel::restore(std::move(support), kernel, lambda, tau);
  const double recomputed = 1.0 - model.train_values().minCoeff();
  if (std::abs(recomputed - tau) > 1e-9) {
    throw IoError("model file tau does not match its support data");
  }
  return model;
}

void save_model(const SupportModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << model_to_json(model);
  if (!out.flush()) throw IoError("failed writing '" + path.string() + "'");
}

SupportModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace kreach
