#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "kreach/cli.hpp"
#include "kreach/csv.hpp"
#include "kreach/model_io.hpp"

using namespace kreach;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = KREACH_CONFIG_DIR;

struct Run {
  int code;
  std::string out;
  std::string log;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, log;
  const int code = run_cli(args, out, log);
  return {code, out.str(), log.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("kreach_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

std::string cfg(const std::string& name) { return (kConfigs / name).string(); }

}  // namespace

TEST_CASE("simulate") {
  TempDir dir;
  const Run r = run({"simulate", "--config", cfg("cwh_rendezvous.json"), "--out", dir / "a.csv"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("M=100 n=4") != std::string::npos);
  CHECK(r.log.find("simulate:") != std::string::npos);
  const MatrixXd pts = read_points_csv(fs::path(dir / "a.csv"));
  CHECK(pts.rows() == 100);
  CHECK(pts.cols() == 4);

  REQUIRE(run({"simulate", "--config", cfg("cwh_rendezvous.json"), "--out", dir / "b.csv"}).code == kExitOk);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));

  REQUIRE(run({"simulate", "--config", cfg("cwh_rendezvous.json"), "--out", dir / "c.csv", "--seed", "99",
               "--samples", "10"}).code == kExitOk);
  CHECK(read_points_csv(fs::path(dir / "c.csv")).rows() == 10);
  CHECK(slurp(dir / "c.csv") != slurp(dir / "a.csv").substr(0, slurp(dir / "c.csv").size()));

  auto doc = nlohmann::json::parse(slurp(cfg("cwh_rendezvous.json")));
  doc["sample_size"] = 0;
  spit(dir / "zero.json", doc.dump());
  const Run zero = run({"simulate", "--config", dir / "zero.json", "--out", dir / "z.csv"});
  CHECK(zero.code == kExitValidation);
  CHECK(zero.log.find("sample_size") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "z.csv"));
}

TEST_CASE("config errors name the field") {
  TempDir dir;
  const auto check = [&](nlohmann::json doc, const std::string& field) {
    spit(dir / "bad.json", doc.dump());
    const Run r = run({"simulate", "--config", dir / "bad.json", "--out", dir / "x.csv"});
    CHECK(r.code == kExitValidation);
    CHECK_MESSAGE(r.log.find(field) != std::string::npos, r.log);
  };
  const auto base = nlohmann::json::parse(slurp(cfg("tora_beta.json")));
  auto doc = base;
  doc["disturbance"]["alpha"] = -1;
  check(doc, "disturbance");
  doc = base;
  doc["system"]["type"] = "pendulum";
  check(doc, "system.type");
  doc = base;
  doc.erase("horizon");
  check(doc, "horizon");
  doc = base;
  doc["initial"]["lo"] = {0.6, -0.7};
  check(doc, "initial");
  doc = base;
  doc["system"]["controller"]["saturation"] = 0;
  check(doc, "system.controller.saturation");

  spit(dir / "syntax.json", "{\"system\": ");
  const Run syntax = run({"simulate", "--config", dir / "syntax.json", "--out", dir / "x.csv"});
  CHECK(syntax.code == kExitValidation);
  CHECK(syntax.log.find("line") != std::string::npos);

  CHECK(run({"simulate", "--config", dir / "missing.json", "--out", dir / "x.csv"}).code == kExitIo);
}

TEST_CASE("fit") {
  TempDir dir;
  REQUIRE(run({"simulate", "--config", cfg("cwh_rendezvous.json"), "--out", dir / "s.csv"}).code == kExitOk);
  const Run r = run({"fit", dir / "s.csv", "--sigma", "0.1", "--lambda", "reciprocal-m", "--out", dir / "m.json"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("lambda=0.01 ") != std::string::npos);
  CHECK(r.log.find("fit:") != std::string::npos);
  CHECK(load_model(dir / "m.json").lambda() == 0.01);

  spit(dir / "one.csv", "x1,x2\n0.3,-0.2\n");
  const Run one = run({"fit", dir / "one.csv", "--lambda", "1", "--out", dir / "one.json"});
  REQUIRE(one.code == kExitOk);
  CHECK(one.out.find("tau=0.5\n") != std::string::npos);

  spit(dir / "empty.csv", "");
  CHECK(run({"fit", dir / "empty.csv", "--out", dir / "e.json"}).code == kExitValidation);
  spit(dir / "header.csv", "x1,x2\n");
  CHECK(run({"fit", dir / "header.csv", "--out", dir / "e.json"}).code == kExitValidation);
  spit(dir / "ragged.csv", "x1,x2\n1,2\n3\n");
  const Run ragged = run({"fit", dir / "ragged.csv", "--out", dir / "e.json"});
  CHECK(ragged.code == kExitValidation);
  CHECK(ragged.log.find("row 2") != std::string::npos);
  spit(dir / "nan.csv", "x1,x2\n1,nan\n");
  CHECK(run({"fit", dir / "nan.csv", "--out", dir / "e.json"}).code == kExitValidation);

  CHECK(run({"fit", dir / "s.csv", "--sigma", "-1", "--out", dir / "e.json"}).code == kExitValidation);
  CHECK(run({"fit", dir / "s.csv", "--lambda", "banana", "--out", dir / "e.json"}).code == kExitValidation);
  CHECK(run({"fit", dir / "nope.csv", "--out", dir / "e.json"}).code == kExitIo);
  CHECK(run({"fit", "--out", dir / "e.json"}).code == kExitValidation);
  CHECK(run({"frobnicate"}).code == kExitValidation);

  CHECK(run({"fit", dir / "s.csv", "--lambda", "0", "--out", dir / "e.json"}).code == kExitValidation);

  // Coincident points with negligible regularization: the factorization breaks down.
  spit(dir / "dup.csv", "x1\n0.5\n0.5\n");
  CHECK(run({"fit", dir / "dup.csv", "--lambda", "1e-300", "--out", dir / "e.json"}).code == kExitNumerical);
}

TEST_CASE("query, contour and validate") {
  TempDir dir;
  REQUIRE(run({"simulate", "--config", cfg("cwh_rendezvous.json"), "--out", dir / "s.csv"}).code == kExitOk);
  REQUIRE(run({"fit", dir / "s.csv", "--out", dir / "m.json"}).code == kExitOk);

  const Run q = run({"query", "--model", dir / "m.json", dir / "s.csv", "--out", dir / "q.csv"});
  REQUIRE(q.code == kExitOk);
  CHECK(q.out.find("100 inside") != std::string::npos);
  CHECK(q.log.find("load+factor:") != std::string::npos);
  std::istringstream lines(slurp(dir / "q.csv"));
  std::string line;
  std::getline(lines, line);
  CHECK(line == "x1,x2,x3,x4,value,inside");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.back() == '1');
  }
  CHECK(rows == 100);

  // An absurd level puts everything outside.
  REQUIRE(run({"query", "--model", dir / "m.json", dir / "s.csv", "--out", dir / "q2.csv", "--level", "2"}).code == kExitOk);
  CHECK(slurp(dir / "q2.csv").find(",1\n") == std::string::npos);

  spit(dir / "wrongdim.csv", "x1,x2\n1,2\n");
  const Run wd = run({"query", "--model", dir / "m.json", dir / "wrongdim.csv", "--out", dir / "w.csv"});
  CHECK(wd.code == kExitValidation);

  const Run c = run({"contour", "--model", dir / "m.json", "--grid", cfg("cwh_grid.json"), "--out", dir / "c.csv"});
  REQUIRE(c.code == kExitOk);
  CHECK(c.out.find("100x100 (10000 nodes)") != std::string::npos);
  CHECK(c.log.find("grid evaluation:") != std::string::npos);
  CHECK(slurp(dir / "c.csv").rfind("x1a,x2a,x1b,x2b\n", 0) == 0);
  const auto sidecar = nlohmann::json::parse(slurp(dir / "c.csv.json"));
  CHECK(sidecar.at("level").get<double>() == doctest::Approx(1.0 - sidecar.at("tau").get<double>()));
  CHECK(sidecar.at("grid").at("resolution_i") == 100);

  spit(dir / "badgrid.json", R"({"dim_i": 0, "dim_j": 9, "half_width_i": 1, "half_width_j": 1})");
  CHECK(run({"contour", "--model", dir / "m.json", "--grid", dir / "badgrid.json", "--out", dir / "c2.csv"}).code ==
        kExitValidation);

  REQUIRE(run({"simulate", "--config", cfg("cwh_rendezvous.json"), "--seed", "5", "--samples", "300", "--out",
               dir / "fresh.csv"}).code == kExitOk);
  const Run v = run({"validate", "--model", dir / "m.json", dir / "fresh.csv"});
  REQUIRE(v.code == kExitOk);
  CHECK(v.out.find("containment_rate=") != std::string::npos);
  CHECK(v.out.find("hausdorff_kernel=") != std::string::npos);
  const Run self = run({"validate", "--model", dir / "m.json", dir / "s.csv"});
  CHECK(self.out.find("containment_rate=1 hausdorff_kernel=0") != std::string::npos);
}

TEST_CASE("model file errors") {
  TempDir dir;
  spit(dir / "p.csv", "x1\n0\n");
  spit(dir / "garbage.json", "not json");
  CHECK(run({"query", "--model", dir / "garbage.json", dir / "p.csv", "--out", dir / "q.csv"}).code == kExitIo);
  spit(dir / "s.csv", "x1\n0\n1\n");
  REQUIRE(run({"fit", dir / "s.csv", "--out", dir / "m.json"}).code == kExitOk);
  auto doc = nlohmann::json::parse(slurp(dir / "m.json"));
  doc["format_version"] = 99;
  spit(dir / "future.json", doc.dump());
  CHECK(run({"query", "--model", dir / "future.json", dir / "p.csv", "--out", dir / "q.csv"}).code == kExitIo);
  CHECK(run({"query", "--model", dir / "absent.json", dir / "p.csv", "--out", dir / "q.csv"}).code == kExitIo);
}

TEST_CASE("sweep") {
  TempDir dir;
  const Run r = run({"sweep", "--config", cfg("unit_disk.json"), "--sizes", "50,100", "--seeds", "1,2", "--out",
                     dir / "sw.csv"});
  REQUIRE(r.code == kExitOk);
  std::istringstream lines(slurp(dir / "sw.csv"));
  std::string line;
  std::getline(lines, line);
  CHECK(line == "M,seed,tau,sym_diff_area,hausdorff");
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].rfind("50,1,", 0) == 0);
  CHECK(rows[3].rfind("100,2,", 0) == 0);

  CHECK(run({"sweep", "--config", cfg("unit_disk.json"), "--sizes", "100,50", "--out", dir / "x.csv"}).code ==
        kExitValidation);
  CHECK(run({"sweep", "--config", cfg("unit_disk.json"), "--sizes", "a,b", "--out", dir / "x.csv"}).code ==
        kExitValidation);
}

TEST_CASE("round trip holds for every shipped config") {
  TempDir dir;
  for (const char* name : {"cwh_rendezvous", "tora_feedback", "tora_beta", "tora_mlp", "unit_disk"}) {
    CAPTURE(name);
    const std::string base = name;
    REQUIRE(run({"simulate", "--config", cfg(base + ".json"), "--out", dir / (base + ".csv")}).code == kExitOk);
    REQUIRE(run({"fit", dir / (base + ".csv"), "--out", dir / (base + ".model.json")}).code == kExitOk);
    const Run q = run({"query", "--model", dir / (base + ".model.json"), dir / (base + ".csv"), "--out",
                       dir / (base + ".q.csv")});
    REQUIRE(q.code == kExitOk);
    const MatrixXd pts = read_points_csv(fs::path(dir / (base + ".csv")));
    CHECK(q.out.find(std::to_string(pts.rows()) + " points, " + std::to_string(pts.rows()) + " inside") !=
          std::string::npos);
  }
}
