#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "recache/config.hpp"
#include "recache/simulator.hpp"

namespace recache {

inline constexpr int kSchemaVersion = 1;

// Fixed formatting so identical runs serialize to identical bytes.
inline std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline nlohmann::json config_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["F"] = cfg.files;
  j["c"] = cfg.cache_budget;
  j["r"] = cfg.rec_budget;
  j["N"] = cfg.users;
  j["M"] = cfg.stations;
  j["T"] = cfg.horizon;
  j["policy"] = policy_name(cfg.policy);
  j["seed"] = cfg.seed;
  j["estimator"] = {{"prior", cfg.estimator.prior_pseudocount},
                    {"exploration_horizon", cfg.estimator.exploration_horizon}};
  j["optimizer"] = {{"restarts", cfg.optimizer.restarts},
                    {"max_alternations", cfg.optimizer.max_alternations},
                    {"tie_break", "lowest_index"}};
  j["fusion"] = {
      {"mode", cfg.fusion.mode == WeightMode::static_lambda ? "static"
                                                            : "time_decay"},
      {"lambda", cfg.fusion.lambda}};
  j["scenario"] = {
      {"mode", cfg.scenario.mode == ScenarioMode::sinr ? "sinr" : "fixed_link"},
      {"area_radius", cfg.scenario.area_radius_m},
      {"sinr_threshold_db", cfg.scenario.sinr_threshold_db},
      {"miss_penalty_alpha", cfg.scenario.miss_penalty_alpha},
      {"rate_threshold_bits", cfg.scenario.rate_threshold_bits},
      {"tx_power_w", cfg.scenario.tx_power_w},
      {"noise_w", cfg.scenario.noise_w},
      {"path_loss_exponent", cfg.scenario.path_loss_exponent},
      {"min_distance_m", cfg.scenario.min_distance_m},
      {"log_base",
       cfg.scenario.log_base == LogBase::base2 ? "log2" : "ln"}};
  const char* src = "csv";
  switch (cfg.ptm.source) {
    case PtmParams::Source::random: src = "random"; break;
    case PtmParams::Source::identity: src = "identity"; break;
    case PtmParams::Source::uniform: src = "uniform"; break;
    case PtmParams::Source::csv: break;
  }
  j["ptm"] = {{"source", src},
              {"shared", cfg.ptm.shared},
              {"concentration", cfg.ptm.concentration},
              {"perturbation", cfg.ptm.perturbation},
              {"files", cfg.ptm.files}};
  j["baseline"] = {{"lrfu_lambda", cfg.baseline.lrfu_decay}};
  return j;
}

// FNV-1a over the canonical JSON dump; the seed is part of the config, so
// the address covers (config, seed).
inline std::string config_hash(const RunConfig& cfg) {
  const std::string dump = config_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf).substr(0, 12);
}

inline nlohmann::json station_json(const StationSummary& s) {
  return {{"station", s.station},
          {"users", s.users},
          {"benchmark_value", s.benchmark_value},
          {"benchmark_exact", s.benchmark_exact},
          {"final_cum_regret", s.final_cum_regret},
          {"mean_expected_hit", s.mean_expected_hit},
          {"mean_realized_hit", s.mean_realized_hit},
          {"final_quarter_expected_hit", s.final_quarter_expected_hit},
          {"final_quarter_realized_hit", s.final_quarter_realized_hit},
          {"mean_delay", s.mean_delay},
          {"mean_throughput", s.mean_throughput}};
}

inline nlohmann::json summary_json(const RunConfig& cfg, const RunMetrics& rm) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "run";
  j["config"] = config_json(cfg);
  j["config_hash"] = config_hash(cfg);
  j["seed"] = cfg.seed;
  nlohmann::json stations = nlohmann::json::array();
  double regret = 0.0, exp_hit = 0.0, real_hit = 0.0, delay = 0.0, thr = 0.0;
  for (const StationSummary& s : rm.stations) {
    stations.push_back(station_json(s));
    regret += s.final_cum_regret;
    exp_hit += s.mean_expected_hit;
    real_hit += s.mean_realized_hit;
    delay += s.mean_delay;
    thr += s.mean_throughput;
  }
  const double m = static_cast<double>(rm.stations.size());
  j["stations"] = std::move(stations);
  j["mean_final_cum_regret"] = regret / m;
  j["mean_expected_hit"] = exp_hit / m;
  j["mean_realized_hit"] = real_hit / m;
  j["mean_delay"] = delay / m;
  j["mean_throughput"] = thr / m;
  return j;
}

inline void write_metrics_csv(const RunMetrics& rm, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write metrics file: " + path);
  out << "slot,station,expected_hit,realized_hit,cum_regret,delay,throughput\n";
  for (const SlotRecord& r : rm.rows) {
    out << r.slot << ',' << r.station << ',' << format_double(r.expected_hit)
        << ',' << format_double(r.realized_hit) << ','
        << format_double(r.cum_regret) << ',' << format_double(r.delay) << ','
        << format_double(r.throughput) << '\n';
  }
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file: " + path.string());
  out << content;
}

struct RunPaths {
  std::filesystem::path dir;
  std::filesystem::path metrics_csv;
  std::filesystem::path summary;
};

// Content-addressed run directory: out_base/run-<hash>-s<seed> holding
// exactly metrics.csv and summary.json.
inline RunPaths write_run_outputs(const RunConfig& cfg, const RunMetrics& rm,
                                  const std::filesystem::path& out_base) {
  RunPaths paths;
  paths.dir = out_base / ("run-" + config_hash(cfg) + "-s" +
                          std::to_string(cfg.seed));
  std::filesystem::create_directories(paths.dir);
  paths.metrics_csv = paths.dir / "metrics.csv";
  paths.summary = paths.dir / "summary.json";
  write_metrics_csv(rm, paths.metrics_csv.string());
  write_text_file(paths.summary, summary_json(cfg, rm).dump(2) + "\n");
  return paths;
}

}  // namespace recache
