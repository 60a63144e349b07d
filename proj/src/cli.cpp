#include "kreach/cli.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kreach/config.hpp"
#include "kreach/csv.hpp"
#include "kreach/error.hpp"
#include "kreach/geometry.hpp"
#include "kreach/model_io.hpp"
#include "kreach/sweep.hpp"

namespace kreach {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    T value{};
    const auto res = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw ValidationError(std::string("cannot parse ") + what + " entry '" + item + "'");
    }
    out.push_back(value);
  }
  return out;
}

struct Options {
  std::string config;
  std::string model;
  std::string out;
  std::string input;
  std::string grid;
  std::string lambda = "reciprocal-m";
  std::string kernel = "abel";
  std::string sizes;
  std::string seeds;
  std::optional<std::uint64_t> seed;
  std::optional<Index> sample_size;
  std::optional<double> level;
  double sigma = 0.1;
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out.flush()) throw IoError("failed writing '" + path.string() + "'");
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& log) {
  RunConfig run = load_run_config(o.config);
  if (o.seed) run.seed = *o.seed;
  if (o.sample_size) {
    if (*o.sample_size < 1) throw ValidationError("--samples must be at least 1");
    run.sample_size = *o.sample_size;
  }
  const auto start = Clock::now();
  const SampleSet samples = run.sample();
  const double elapsed = seconds_since(start);
  write_points_csv(o.out, samples.points());
  out << "M=" << samples.size() << " n=" << samples.dim() << " wrote " << o.out << "\n";
  log << "simulate: " << std::fixed << std::setprecision(3) << elapsed << " s\n";
  return kExitOk;
}

// Human-facing summaries; data files keep full round-trip precision.
std::string summary_number(double v) {
  std::ostringstream s;
  s << std::setprecision(15) << v;
  return s.str();
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream& log) {
  const SampleSet samples(read_points_csv(o.input), o.input);
  const FitConfig config{make_kernel(parse_kernel_family(o.kernel), o.sigma), parse_lambda_rule(o.lambda)};
  const auto start = Clock::now();
  const SupportModel model = SupportModel::fit(samples, config);
  const double elapsed = seconds_since(start);
  save_model(model, o.out);
  out << "M=" << model.size() << " n=" << model.dim() << " lambda=" << summary_number(model.lambda())
      << " tau=" << summary_number(model.decision_threshold()) << "\n";
  log << "fit: " << std::fixed << std::setprecision(3) << elapsed << " s\n";
  return kExitOk;
}

int cmd_query(const Options& o, std::ostream& out, std::ostream& log) {
  const auto load_start = Clock::now();
  const SupportModel model = load_model(o.model);
  const double load_time = seconds_since(load_start);
  const MatrixXd points = read_points_csv(o.input);
  if (points.cols() != model.dim()) {
    throw ValidationError(o.input + ": row 1 has dimension " + std::to_string(points.cols()) + ", model expects " +
                          std::to_string(model.dim()));
  }
  const auto start = Clock::now();
  const VectorXd values = model.decision_values(points);
  const double query_time = seconds_since(start);

  auto header = coordinate_header(points.cols());
  header.push_back("value");
  header.push_back("inside");
  std::vector<std::vector<std::string>> rows;
  Index inside = 0;
  for (Index i = 0; i < points.rows(); ++i) {
    std::vector<std::string> row;
    for (Index j = 0; j < points.cols(); ++j) row.push_back(format_double(points(i, j)));
    const bool in = model.membership(values(i), o.level) == Membership::Inside;
    inside += in;
    row.push_back(format_double(values(i)));
    row.push_back(in ? "1" : "0");
    rows.push_back(std::move(row));
  }
  write_csv(o.out, header, rows);
  out << "queried " << points.rows() << " points, " << inside << " inside\n";
  log << std::fixed << std::setprecision(3) << "load+factor: " << load_time << " s, query: " << query_time
      << " s, total: " << load_time + query_time << " s\n";
  return kExitOk;
}

int cmd_contour(const Options& o, std::ostream& out, std::ostream& log) {
  const auto load_start = Clock::now();
  const SupportModel model = load_model(o.model);
  const double load_time = seconds_since(load_start);
  const VectorXd center = model.support().colwise().mean().transpose();
  const GridSpec grid = load_grid(o.grid, center);
  grid.validate(model.dim());

  const auto start = Clock::now();
  const MatrixXd values = grid_decision_values(model, grid);
  const double grid_time = seconds_since(start);
  const double level = o.level.value_or(model.default_level());
  const ContourSet contour = extract_contour(values, grid, level);

  const std::string si = std::to_string(grid.dim_i + 1);
  const std::string sj = std::to_string(grid.dim_j + 1);
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : contour.segments) {
    rows.push_back({format_double(s.a(0)), format_double(s.a(1)), format_double(s.b(0)), format_double(s.b(1))});
  }
  write_csv(o.out, {"x" + si + "a", "x" + sj + "a", "x" + si + "b", "x" + sj + "b"}, rows);

  nlohmann::json sidecar = {
      {"level", level},
      {"tau", model.decision_threshold()},
      {"grid", nlohmann::json::parse(grid_to_json(grid))},
  };
  write_text(o.out + ".json", sidecar.dump(1) + "\n");

  out << "grid " << grid.resolution_i << "x" << grid.resolution_j << " (" << grid.resolution_i * grid.resolution_j
      << " nodes), " << contour.segments.size() << " segments at level " << format_double(level) << "\n";
  log << std::fixed << std::setprecision(3) << "load+factor: " << load_time << " s, grid evaluation: " << grid_time
      << " s, total: " << load_time + grid_time << " s\n";
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& log) {
  const SupportModel model = load_model(o.model);
  const MatrixXd fresh = read_points_csv(o.input);
  if (fresh.cols() != model.dim()) {
    throw ValidationError(o.input + ": row 1 has dimension " + std::to_string(fresh.cols()) + ", model expects " +
                          std::to_string(model.dim()));
  }
  const auto start = Clock::now();
  const double rate = containment_rate(model, fresh);
  const double dh = hausdorff(fresh, model.support(), KernelInducedMetric{model.kernel()});
  out << "containment_rate=" << format_double(rate) << " hausdorff_kernel=" << format_double(dh)
      << " fresh=" << fresh.rows() << "\n";
  log << "validate: " << std::fixed << std::setprecision(3) << seconds_since(start) << " s\n";
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& log) {
  const RunConfig run = load_run_config(o.config);
  const std::vector<Index> sizes = o.sizes.empty() ? run.sweep.sizes : parse_list<Index>(o.sizes, "--sizes");
  const std::vector<std::uint64_t> seeds =
      o.seeds.empty() ? (run.sweep.seeds.empty() ? std::vector<std::uint64_t>{run.seed} : run.sweep.seeds)
                      : parse_list<std::uint64_t>(o.seeds, "--seeds");
  if (sizes.empty()) throw ValidationError("sweep: no sample sizes given (use --sizes or sweep.sizes)");

  SweepOptions options;
  options.kernel = run.fit.kernel;
  options.truth = run.truth();
  options.area = run.sweep.area;
  options.fresh_size = run.sweep.fresh_size;

  const auto start = Clock::now();
  const auto rows = convergence_sweep(run.generator(), sizes, seeds, options);
  std::vector<std::vector<std::string>> table;
  for (const auto& r : rows) {
    table.push_back({std::to_string(r.sample_size), std::to_string(r.seed), format_double(r.tau),
                     r.sym_diff_area ? format_double(*r.sym_diff_area) : "", format_double(r.hausdorff)});
  }
  write_csv(o.out, {"M", "seed", "tau", "sym_diff_area", "hausdorff"}, table);
  out << "sweep: " << rows.size() << " rows written to " << o.out << "\n";
  log << "sweep: " << std::fixed << std::setprecision(3) << seconds_since(start) << " s\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& log) {
  CLI::App app{"Forward reachable set estimation from sampled terminal states"};
  app.name("kreach");
  app.require_subcommand(1);

  Options o;
  auto* simulate = app.add_subcommand("simulate", "Sample terminal states from a run config");
  simulate->add_option("--config", o.config, "Run config JSON")->required();
  simulate->add_option("--out", o.out, "Output sample CSV")->required();
  simulate->add_option("--seed", o.seed, "Override the master seed");
  simulate->add_option("--samples", o.sample_size, "Override the sample size M");

  auto* fit = app.add_subcommand("fit", "Fit a support model to a sample CSV");
  fit->add_option("samples", o.input, "Sample CSV")->required();
  fit->add_option("--sigma", o.sigma, "Kernel bandwidth")->capture_default_str();
  fit->add_option("--lambda", o.lambda, "Regularization: a value or reciprocal-m")->capture_default_str();
  fit->add_option("--kernel", o.kernel, "abel or gaussian")->capture_default_str();
  fit->add_option("--out", o.out, "Output model JSON")->required();

  auto* query = app.add_subcommand("query", "Evaluate a model at points");
  query->add_option("--model", o.model, "Model JSON")->required();
  query->add_option("points", o.input, "Points CSV")->required();
  query->add_option("--out", o.out, "Output CSV")->required();
  query->add_option("--level", o.level, "Membership level (default 1 - tau)");

  auto* contour = app.add_subcommand("contour", "Extract the set boundary on a 2D cross-section");
  contour->add_option("--model", o.model, "Model JSON")->required();
  contour->add_option("--grid", o.grid, "Grid JSON")->required();
  contour->add_option("--out", o.out, "Output segment CSV (a .json sidecar is written next to it)")->required();
  contour->add_option("--level", o.level, "Contour level (default 1 - tau)");

  auto* validate = app.add_subcommand("validate", "Monte Carlo containment and Hausdorff diagnostics");
  validate->add_option("--model", o.model, "Model JSON")->required();
  validate->add_option("fresh", o.input, "Fresh sample CSV")->required();

  auto* sweep = app.add_subcommand("sweep", "Convergence sweep over sample sizes and seeds");
  sweep->add_option("--config", o.config, "Run config JSON")->required();
  sweep->add_option("--sizes", o.sizes, "Comma-separated ascending sample sizes");
  sweep->add_option("--seeds", o.seeds, "Comma-separated seeds");
  sweep->add_option("--out", o.out, "Output CSV")->required();

  std::vector<const char*> argv{"kreach"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    log << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(o, out, log);
    if (fit->parsed()) return cmd_fit(o, out, log);
    if (query->parsed()) return cmd_query(o, out, log);
    if (contour->parsed()) return cmd_contour(o, out, log);
    if (validate->parsed()) return cmd_validate(o, out, log);
    if (sweep->parsed()) return cmd_sweep(o, out, log);
  } catch (const ValidationError& e) {
    log << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    log << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const NumericalError& e) {
    log << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitValidation;
}

}  // namespace kreach
