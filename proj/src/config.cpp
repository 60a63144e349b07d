#include "kreach/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kreach/error.hpp"

namespace kreach {

using nlohmann::json;

namespace {

// A JSON value plus its dotted path, so every error names the field.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  bool has(const std::string& key) const { return value_.is_object() && value_.contains(key) && !value_[key].is_null(); }

  Node at(const std::string& key) const {
    if (!value_.is_object()) fail("must be an object");
    if (!has(key)) throw ValidationError("config: missing field '" + child_path(key) + "'");
    return Node(value_[key], child_path(key));
  }

  template <typename T>
  T get() const {
    try {
      return value_.get<T>();
    } catch (const json::exception&) {
      fail("has the wrong type");
    }
  }

  template <typename T>
  T get(const std::string& key, T fallback) const {
    return has(key) ? at(key).get<T>() : fallback;
  }

  double number() const {
    if (!value_.is_number()) fail("must be a number");
    return value_.get<double>();
  }

  Index count() const {
    if (!value_.is_number_integer()) fail("must be an integer");
    return value_.get<Index>();
  }

  std::string string() const {
    if (!value_.is_string()) fail("must be a string");
    return value_.get<std::string>();
  }

  VectorXd vector(Index expected = -1) const {
    if (!value_.is_array()) fail("must be an array of numbers");
    VectorXd out(static_cast<Index>(value_.size()));
    for (std::size_t i = 0; i < value_.size(); ++i) {
      if (!value_[i].is_number()) fail("must contain only numbers");
      out(static_cast<Index>(i)) = value_[i].get<double>();
    }
    if (expected >= 0 && out.size() != expected) fail("must have " + std::to_string(expected) + " entries");
    return out;
  }

  std::pair<double, double> interval() const {
    const VectorXd v = vector(2);
    return {v(0), v(1)};
  }

  const json& raw() const { return value_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("config: field '" + path_ + "' " + what);
  }

 private:
  std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& value_;
  std::string path_;
};

json parse_document(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(what + ": " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

DisturbanceSpec parse_disturbance(const Node& node) {
  const std::string type = node.at("type").string();
  if (type == "none") return NoDisturbance{};
  if (type == "gaussian") {
    GaussianDisturbance g;
    g.variance = node.at("variance").vector();
    g.mean = node.has("mean") ? node.at("mean").vector(g.variance.size()) : VectorXd::Zero(g.variance.size());
    return g;
  }
  if (type == "beta") {
    ScaledBetaDisturbance b;
    b.alpha = node.at("alpha").number();
    b.beta = node.at("beta").number();
    b.scale = node.at("scale").number();
    b.dims = node.has("dims") ? node.at("dims").count() : 4;
    if (node.has("mask")) {
      const Node mask = node.at("mask");
      if (!mask.raw().is_array()) mask.fail("must be an array of booleans");
      for (const auto& m : mask.raw()) {
        if (!m.is_boolean()) mask.fail("must be an array of booleans");
        b.mask.push_back(m.get<bool>());
      }
    }
    return b;
  }
  node.at("type").fail("must be one of none, gaussian, beta");
}

InitialSpec parse_initial(const Node& node) {
  const std::string type = node.at("type").string();
  if (type == "point") return InitialPoint{node.at("x").vector()};
  if (type == "box") return InitialBox{node.at("lo").vector(), node.at("hi").vector()};
  node.at("type").fail("must be one of point, box");
}

std::variant<ToraFeedback, MlpController> parse_controller(const Node& node, const std::filesystem::path& base) {
  const std::string type = node.at("type").string();
  if (type == "feedback") {
    ToraFeedback fb;
    fb.k1 = node.get<double>("k1", fb.k1);
    fb.k2 = node.get<double>("k2", fb.k2);
    fb.saturation = node.get<double>("saturation", fb.saturation);
    if (!(fb.saturation > 0.0)) node.at("saturation").fail("must be positive");
    return fb;
  }
  if (type == "mlp") {
    if (node.has("path")) return load_mlp(resolve(base, node.at("path").string()));
    return mlp_from_json(node.at("network").raw().dump());
  }
  node.at("type").fail("must be one of feedback, mlp");
}

SystemConfig parse_system(const Node& root, const Node& sys, const std::filesystem::path& base,
                          const std::string& type) {
  SystemConfig config;
  config.horizon = root.at("horizon").count();
  if (root.has("disturbance")) config.disturbance = parse_disturbance(root.at("disturbance"));
  if (root.has("initial")) config.initial = parse_initial(root.at("initial"));

  if (type == "cwh") {
    CwhSystem c;
    c.omega = sys.get<double>("omega", c.omega);
    c.mass = sys.get<double>("mass", c.mass);
    c.dt = sys.get<double>("dt", c.dt);
    if (sys.has("inputs")) {
      const Node inputs = sys.at("inputs");
      if (!inputs.raw().is_array()) inputs.fail("must be an array of [Fx, Fy] pairs");
      for (std::size_t k = 0; k < inputs.raw().size(); ++k) {
        c.inputs.emplace_back(Node(inputs.raw()[k], inputs.path() + "[" + std::to_string(k) + "]").vector(2));
      }
    } else {
      Eigen::Vector2d start = Eigen::Vector2d::Zero();
      if (const auto* p = std::get_if<InitialPoint>(&config.initial); p && p->x.size() == 4) start = p->x.head<2>();
      if (const auto* b = std::get_if<InitialBox>(&config.initial); b && b->lo.size() == 4) {
        start = 0.5 * (b->lo + b->hi).head<2>();
      }
      c.inputs = default_cwh_inputs(start, config.horizon);
    }
    config.kind = std::move(c);
  } else if (type == "tora") {
    ToraSystem t;
    if (sys.has("controller")) t.controller = parse_controller(sys.at("controller"), base);
    t.control_period = sys.get<double>("control_period", t.control_period);
    t.substeps = sys.has("substeps") ? sys.at("substeps").count() : t.substeps;
    config.kind = std::move(t);
  } else if (type == "external") {
    config.kind = ExternalSamples{resolve(base, sys.at("path").string())};
  } else {
    sys.at("type").fail("must be one of cwh, tora, external, uniform-disk");
  }
  return config;
}

FitConfig parse_fit(const Node& node) {
  FitConfig fit;
  fit.kernel.family = parse_kernel_family(node.get<std::string>("kernel", "abel"));
  fit.kernel.bandwidth = node.get<double>("sigma", 0.1);
  fit.kernel.validate();
  if (node.has("lambda")) {
    const Node l = node.at("lambda");
    fit.lambda = l.raw().is_number() ? LambdaRule::explicit_value(l.number()) : parse_lambda_rule(l.string());
  }
  return fit;
}

GridSpec parse_grid_node(const Node& node, const VectorXd& default_center) {
  GridSpec grid;
  grid.dim_i = node.get<Index>("dim_i", 0);
  grid.dim_j = node.get<Index>("dim_j", 1);
  grid.fixed = node.has("fixed") ? node.at("fixed").vector() : default_center;
  const Index n = grid.fixed.size();
  if (grid.dim_i < 0 || grid.dim_i >= n || grid.dim_j < 0 || grid.dim_j >= n) {
    node.fail("has a coordinate index outside the state dimension " + std::to_string(n));
  }
  const auto range = [&](const std::string& suffix, Index dim) -> std::pair<double, double> {
    if (node.has("range_" + suffix)) return node.at("range_" + suffix).interval();
    const double hw = node.at("half_width_" + suffix).number();
    return {grid.fixed(dim) - hw, grid.fixed(dim) + hw};
  };
  grid.range_i = range("i", grid.dim_i);
  grid.range_j = range("j", grid.dim_j);
  const Index res = node.has("resolution") ? node.at("resolution").count() : 100;
  grid.resolution_i = node.has("resolution_i") ? node.at("resolution_i").count() : res;
  grid.resolution_j = node.has("resolution_j") ? node.at("resolution_j").count() : res;
  grid.validate(n);
  return grid;
}

std::string read_file(const std::filesystem::path& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + what + " '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

LambdaRule parse_lambda_rule(const std::string& text) {
  if (text == "reciprocal-m" || text == "1/M" || text == "1/m") return LambdaRule::reciprocal_m();
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ValidationError("lambda must be a positive number or 'reciprocal-m', got '" + text + "'");
  }
  return LambdaRule::explicit_value(value);
}

SampleGenerator RunConfig::generator() const {
  if (const auto* disk = std::get_if<DiskSource>(&source)) return uniform_disk_generator(disk->center, disk->radius);
  return system_generator(std::get<SystemConfig>(source));
}

std::function<bool(const Eigen::Vector2d&)> RunConfig::truth() const {
  if (const auto* disk = std::get_if<DiskSource>(&source)) {
    const DiskSource d = *disk;
    return [d](const Eigen::Vector2d& p) { return (p - d.center).squaredNorm() <= d.radius * d.radius; };
  }
  return {};
}

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base_dir) {
  const json doc = parse_document(text, "config");
  const Node root(doc, "");
  if (!doc.is_object()) root.fail("must be an object");

  RunConfig run;
  const Node sys = root.at("system");
  const std::string type = sys.at("type").string();
  if (type == "uniform-disk") {
    DiskSource d;
    if (sys.has("center")) d.center = sys.at("center").vector(2);
    d.radius = sys.get<double>("radius", 1.0);
    if (!(d.radius > 0.0)) sys.at("radius").fail("must be positive");
    run.source = d;
  } else {
    SystemConfig config = parse_system(root, sys, base_dir, type);
    config.validate();
    run.source = std::move(config);
  }

  run.sample_size = root.at("sample_size").count();
  if (run.sample_size < 1) root.at("sample_size").fail("must be at least 1");
  if (root.has("seed")) {
    const Node s = root.at("seed");
    if (!s.raw().is_number_unsigned()) s.fail("must be a nonnegative integer");
    run.seed = s.raw().get<std::uint64_t>();
  }
  if (root.has("fit")) run.fit = parse_fit(root.at("fit"));
  if (root.has("grid")) {
    const Index n = std::holds_alternative<DiskSource>(run.source) ? 2 : std::get<SystemConfig>(run.source).state_dim();
    const Node g = root.at("grid");
    if (!g.has("fixed") && n > 0) g.fail("needs a 'fixed' vector in a run config");
    run.grid = parse_grid_node(g, VectorXd::Zero(std::max<Index>(n, 0)));
  }
  if (root.has("sweep")) {
    const Node s = root.at("sweep");
    if (s.has("sizes")) {
      for (const auto& v : s.at("sizes").raw()) run.sweep.sizes.push_back(v.get<Index>());
    }
    if (s.has("seeds")) {
      for (const auto& v : s.at("seeds").raw()) run.sweep.seeds.push_back(v.get<std::uint64_t>());
    }
    run.sweep.fresh_size = s.has("fresh_size") ? s.at("fresh_size").count() : run.sweep.fresh_size;
    if (s.has("area")) {
      const Node a = s.at("area");
      const auto rx = a.at("range_x").interval();
      const auto ry = a.at("range_y").interval();
      run.sweep.area = AreaGrid{rx.first, rx.second, ry.first, ry.second, a.get<Index>("resolution", 200)};
      run.sweep.area.validate();
    }
  }
  return run;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_file(path, "config"), path.parent_path());
}

GridSpec parse_grid(const std::string& text, const VectorXd& default_center) {
  const json doc = parse_document(text, "grid");
  return parse_grid_node(Node(doc, "grid"), default_center);
}

GridSpec load_grid(const std::filesystem::path& path, const VectorXd& default_center) {
  return parse_grid(read_file(path, "grid file"), default_center);
}

std::string grid_to_json(const GridSpec& grid) {
  json doc = {
      {"dim_i", grid.dim_i},
      {"dim_j", grid.dim_j},
      {"fixed", std::vector<double>(grid.fixed.data(), grid.fixed.data() + grid.fixed.size())},
      {"range_i", {grid.range_i.first, grid.range_i.second}},
      {"range_j", {grid.range_j.first, grid.range_j.second}},
      {"resolution_i", grid.resolution_i},
      {"resolution_j", grid.resolution_j},
  };
  return doc.dump(1);
}

}  // namespace kreach
