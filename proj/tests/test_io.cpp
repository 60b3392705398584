#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "recache/config.hpp"
#include "recache/io.hpp"
#include "recache/ptm_io.hpp"
#include "recache/sweep.hpp"

using namespace recache;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("recache_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

long count_lines(const std::string& text) {
  long n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

RunConfig tiny_config() {
  RunConfig cfg;
  cfg.files = 4;
  cfg.cache_budget = 1;
  cfg.rec_budget = 1;
  cfg.users = 10;
  cfg.stations = 1;
  cfg.horizon = 100;
  cfg.policy = Policy::bayes;
  cfg.seed = 1;
  return cfg;
}

}  // namespace

TEST_CASE("ptm csv round trip") {
  const fs::path dir = temp_dir("ptm");
  const Ptm p(3, {0.2, 0.3, 0.5, 0.0, 1.0, 0.0, 0.25, 0.25, 0.5});
  const fs::path file = dir / "p.csv";
  save_ptm_csv(p, file.string());
  const Ptm q = load_ptm_csv(file.string());
  REQUIRE(q.files() == 3);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) CHECK(q.at(i, j) == p.at(i, j));
}

TEST_CASE("ptm loader validates shape and column sums") {
  const fs::path dir = temp_dir("ptm_bad");
  {
    std::ofstream out(dir / "rect.csv");
    out << "0.5,0.5,0.0\n0.5,0.5,1.0\n";
  }
  CHECK_THROWS_AS(load_ptm_csv((dir / "rect.csv").string()), ParseError);
  {
    std::ofstream out(dir / "sum.csv");
    out << "0.6,0.2\n0.6,0.8\n";
  }
  CHECK_THROWS_AS(load_ptm_csv((dir / "sum.csv").string()), ValidationError);
  {
    std::ofstream out(dir / "nan.csv");
    out << "0.5,abc\n0.5,0.5\n";
  }
  CHECK_THROWS_AS(load_ptm_csv((dir / "nan.csv").string()), ParseError);
  CHECK_THROWS_AS(load_ptm_csv((dir / "missing.csv").string()), ParseError);
}

TEST_CASE("run outputs: exactly two files, T*M csv rows, schema version") {
  const fs::path dir = temp_dir("run");
  const RunConfig cfg = tiny_config();
  const RunMetrics rm = run(cfg);
  const RunPaths paths = write_run_outputs(cfg, rm, dir);

  int files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(paths.dir))
    ++files;
  CHECK(files == 2);

  const std::string csv = slurp(paths.metrics_csv);
  CHECK(count_lines(csv) == 1 + cfg.horizon * cfg.stations);
  CHECK(csv.rfind("slot,station,expected_hit,realized_hit,cum_regret,delay,"
                  "throughput\n", 0) == 0);

  const auto summary = nlohmann::json::parse(slurp(paths.summary));
  CHECK(summary["schema_version"] == kSchemaVersion);
  CHECK(summary["kind"] == "run");
  CHECK(summary["config"]["F"] == 4);
  CHECK(summary["stations"].size() == 1);
}

TEST_CASE("config hash distinguishes configs and is stable") {
  const RunConfig a = tiny_config();
  RunConfig b = a;
  CHECK(config_hash(a) == config_hash(b));
  b.seed = 2;
  CHECK(config_hash(a) != config_hash(b));
  b = a;
  b.horizon = 101;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("rerunning an identical config yields byte-identical outputs") {
  const fs::path dir1 = temp_dir("rerun1");
  const fs::path dir2 = temp_dir("rerun2");
  RunConfig cfg = tiny_config();
  cfg.stations = 2;
  cfg.users = 8;
  cfg.horizon = 40;
  const RunPaths p1 = write_run_outputs(cfg, run(cfg), dir1);
  const RunPaths p2 = write_run_outputs(cfg, run(cfg), dir2);
  CHECK(slurp(p1.metrics_csv) == slurp(p2.metrics_csv));
  CHECK(slurp(p1.summary) == slurp(p2.summary));
}

TEST_CASE("sweep writes aggregate json with one entry per run") {
  const fs::path dir = temp_dir("sweep");
  const std::string cfg_text =
      "F=4\nc=1\nr=1\nN=6\nM=2\nT=15\npolicy=bayes\nseed=1\n"
      "[sweep]\nlambda = 0,0.5,1\nseeds = 2\n";
  const ExperimentSpec spec = parse_config_text(cfg_text);
  const SweepOutput out = run_sweep(spec, 2, dir);
  CHECK(out.runs.size() == 6);

  const auto agg = nlohmann::json::parse(slurp(out.dir / "aggregate.json"));
  CHECK(agg["schema_version"] == kSchemaVersion);
  CHECK(agg["kind"] == "sweep");
  CHECK(agg["runs"].size() == 6);

  CHECK(fs::exists(out.dir / "hit_vs_lambda.csv"));
  CHECK(fs::exists(out.dir / "sigma_vs_t.csv"));
  CHECK_FALSE(fs::exists(out.dir / "hit_vs_cache.csv"));  // c axis not swept
  CHECK_FALSE(fs::exists(out.dir / "regret_vs_T.csv"));   // T axis not swept

  // six content-addressed run directories, each with two files
  int run_dirs = 0;
  for (const auto& e : fs::directory_iterator(out.dir))
    if (e.is_directory()) ++run_dirs;
  CHECK(run_dirs == 6);
}

TEST_CASE("sweep reruns are byte-identical") {
  const fs::path dir1 = temp_dir("sweep_a");
  const fs::path dir2 = temp_dir("sweep_b");
  const std::string cfg_text =
      "F=4\nc=1\nr=2\nN=5\nM=1\nT=12\npolicy=lru\nseed=9\n"
      "[sweep]\nc = 1,2\nseeds = 2\n";
  const ExperimentSpec spec = parse_config_text(cfg_text);
  const SweepOutput a = run_sweep(spec, 2, dir1);
  const SweepOutput b = run_sweep(spec, 1, dir2);  // worker count is irrelevant
  CHECK(slurp(a.dir / "aggregate.json") == slurp(b.dir / "aggregate.json"));
  CHECK(slurp(a.dir / "hit_vs_cache.csv") == slurp(b.dir / "hit_vs_cache.csv"));
  CHECK(slurp(a.dir / "sigma_vs_t.csv") == slurp(b.dir / "sigma_vs_t.csv"));
}

TEST_CASE("scaling output contains a finite fitted exponent") {
  const fs::path dir = temp_dir("scaling");
  const std::string cfg_text =
      "F=4\nc=1\nr=1\nN=8\nM=1\nT=10\npolicy=random\nseed=1\n"
      "[sweep]\nT = 10,20,50,120,320\nseeds = 10\n";
  const ExperimentSpec spec = parse_config_text(cfg_text);
  const ScalingOutput out = run_scaling(spec, 2, dir);
  const auto j = nlohmann::json::parse(slurp(out.dir / "scaling.json"));
  CHECK(j["kind"] == "scaling");
  REQUIRE(j.contains("fitted_exponent"));
  CHECK(std::isfinite(j["fitted_exponent"].get<double>()));
  CHECK(fs::exists(out.dir / "regret_vs_T.csv"));
  const std::string csv = slurp(out.dir / "regret_vs_T.csv");
  CHECK(count_lines(csv) == 1 + 5 * 10);
}
