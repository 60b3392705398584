#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "recache/config.hpp"
#include "recache/io.hpp"
#include "recache/parallel.hpp"
#include "recache/simulator.hpp"

namespace recache {

struct SweepPoint {
  int index = 0;
  RunConfig cfg;
  long horizon = 0;
  double lambda = 0.0;
  int cache_budget = 0;
  Policy policy = Policy::bayes;
  std::uint64_t seed = 0;
};

// Cartesian product of the sweep axes (absent axes contribute the base
// value) times the replicate seeds, in deterministic order.
inline std::vector<SweepPoint> expand_sweep(const ExperimentSpec& spec) {
  auto horizons = spec.sweep_horizons.empty()
                      ? std::vector<long>{spec.base.horizon}
                      : spec.sweep_horizons;
  auto lambdas = spec.sweep_lambda.empty()
                     ? std::vector<double>{spec.base.fusion.lambda}
                     : spec.sweep_lambda;
  auto caches = spec.sweep_cache.empty()
                    ? std::vector<int>{spec.base.cache_budget}
                    : spec.sweep_cache;
  auto policies = spec.sweep_policy.empty()
                      ? std::vector<Policy>{spec.base.policy}
                      : spec.sweep_policy;
  std::vector<SweepPoint> points;
  int index = 0;
  for (long t : horizons)
    for (double l : lambdas)
      for (int c : caches)
        for (Policy p : policies)
          for (int s = 0; s < spec.replicate_seeds; ++s) {
            SweepPoint pt;
            pt.cfg = spec.base;
            pt.cfg.horizon = t;
            pt.cfg.cache_budget = c;
            pt.cfg.policy = p;
            pt.cfg.seed = spec.base.seed + static_cast<std::uint64_t>(s);
            if (!spec.sweep_lambda.empty()) {
              pt.cfg.fusion.mode = WeightMode::static_lambda;
              pt.cfg.fusion.lambda = l;
            }
            pt.index = index++;
            pt.horizon = t;
            pt.lambda = l;
            pt.cache_budget = c;
            pt.policy = p;
            pt.seed = pt.cfg.seed;
            points.push_back(std::move(pt));
          }
  return points;
}

struct SweepRunRecord {
  SweepPoint point;
  std::vector<StationSummary> stations;
  std::vector<SlotRecord> sigma_rows;  // strided trace for sigma_vs_t.csv
};

struct SweepOutput {
  std::filesystem::path dir;
  std::vector<SweepRunRecord> runs;
};

namespace detail {

inline std::string spec_hash(const ExperimentSpec& spec) {
  nlohmann::json j;
  j["base"] = config_json(spec.base);
  j["sweep_T"] = spec.sweep_horizons;
  j["sweep_lambda"] = spec.sweep_lambda;
  j["sweep_c"] = spec.sweep_cache;
  nlohmann::json pol = nlohmann::json::array();
  for (Policy p : spec.sweep_policy) pol.push_back(policy_name(p));
  j["sweep_policy"] = pol;
  j["seeds"] = spec.replicate_seeds;
  const std::string dump = j.dump();
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

inline std::vector<SlotRecord> strided_sigma(const RunMetrics& rm,
                                             int stations, long horizon) {
  const long stride = std::max<long>(1, horizon / 512);
  std::vector<SlotRecord> out;
  for (const SlotRecord& r : rm.rows) {
    if (r.slot < 64 || r.slot % stride == 0 || r.slot == horizon - 1)
      out.push_back(r);
  }
  (void)stations;
  return out;
}

inline nlohmann::json sweep_run_json(const SweepRunRecord& rec) {
  nlohmann::json j;
  j["index"] = rec.point.index;
  j["T"] = rec.point.horizon;
  j["lambda"] = rec.point.lambda;
  j["c"] = rec.point.cache_budget;
  j["policy"] = policy_name(rec.point.policy);
  j["seed"] = rec.point.seed;
  nlohmann::json stations = nlohmann::json::array();
  double regret = 0.0, exp_hit = 0.0, real_hit = 0.0, delay = 0.0, thr = 0.0;
  for (const StationSummary& s : rec.stations) {
    stations.push_back(station_json(s));
    regret += s.final_cum_regret;
    exp_hit += s.mean_expected_hit;
    real_hit += s.mean_realized_hit;
    delay += s.mean_delay;
    thr += s.mean_throughput;
  }
  const double m = static_cast<double>(rec.stations.size());
  j["stations"] = std::move(stations);
  j["mean_final_cum_regret"] = regret / m;
  j["mean_expected_hit"] = exp_hit / m;
  j["mean_realized_hit"] = real_hit / m;
  j["mean_delay"] = delay / m;
  j["mean_throughput"] = thr / m;
  return j;
}

}  // namespace detail

// Executes the sweep with a worker pool; each run writes its own directory,
// then the aggregate JSON and the plot-ready long-format CSVs are written
// from the deterministic (index-ordered) reduce.
inline SweepOutput run_sweep(const ExperimentSpec& spec, int workers,
                             const std::filesystem::path& out_base) {
  const std::vector<SweepPoint> points = expand_sweep(spec);
  SweepOutput out;
  out.dir = out_base / ("sweep-" + detail::spec_hash(spec));
  std::filesystem::create_directories(out.dir);
  out.runs.resize(points.size());

  parallel_for(static_cast<int>(points.size()), workers, [&](int i) {
    const SweepPoint& pt = points[i];
    const RunMetrics rm = run(pt.cfg);
    write_run_outputs(pt.cfg, rm, out.dir);
    SweepRunRecord rec;
    rec.point = pt;
    rec.stations = rm.stations;
    rec.sigma_rows =
        detail::strided_sigma(rm, pt.cfg.stations, pt.cfg.horizon);
    out.runs[i] = std::move(rec);
  });

  // aggregate.json
  nlohmann::json agg;
  agg["schema_version"] = kSchemaVersion;
  agg["kind"] = "sweep";
  agg["spec_hash"] = detail::spec_hash(spec);
  agg["base_config"] = config_json(spec.base);
  nlohmann::json runs = nlohmann::json::array();
  for (const SweepRunRecord& rec : out.runs)
    runs.push_back(detail::sweep_run_json(rec));
  agg["runs"] = std::move(runs);
  write_text_file(out.dir / "aggregate.json", agg.dump(2) + "\n");

  // Plot CSVs for whichever axes were swept; sigma trace always.
  auto run_prefix = [](const SweepRunRecord& r) {
    return std::to_string(r.point.horizon) + "," +
           format_double(r.point.lambda) + "," +
           std::to_string(r.point.cache_budget) + "," +
           policy_name(r.point.policy) + "," + std::to_string(r.point.seed);
  };
  const std::string axis_header = "T,lambda,c,policy,seed";

  if (!spec.sweep_cache.empty()) {
    std::string body = axis_header +
                       ",station,mean_realized_hit,mean_expected_hit,"
                       "mean_delay,mean_throughput\n";
    for (const SweepRunRecord& r : out.runs)
      for (const StationSummary& s : r.stations)
        body += run_prefix(r) + "," + std::to_string(s.station) + "," +
                format_double(s.mean_realized_hit) + "," +
                format_double(s.mean_expected_hit) + "," +
                format_double(s.mean_delay) + "," +
                format_double(s.mean_throughput) + "\n";
    write_text_file(out.dir / "hit_vs_cache.csv", body);
  }
  if (!spec.sweep_lambda.empty()) {
    std::string body =
        axis_header + ",station,mean_expected_hit,mean_realized_hit\n";
    for (const SweepRunRecord& r : out.runs)
      for (const StationSummary& s : r.stations)
        body += run_prefix(r) + "," + std::to_string(s.station) + "," +
                format_double(s.mean_expected_hit) + "," +
                format_double(s.mean_realized_hit) + "\n";
    write_text_file(out.dir / "hit_vs_lambda.csv", body);
  }
  if (!spec.sweep_horizons.empty()) {
    std::string body = axis_header + ",station,final_cum_regret\n";
    for (const SweepRunRecord& r : out.runs)
      for (const StationSummary& s : r.stations)
        body += run_prefix(r) + "," + std::to_string(s.station) + "," +
                format_double(s.final_cum_regret) + "\n";
    write_text_file(out.dir / "regret_vs_T.csv", body);
  }
  {
    std::string body = axis_header + ",station,slot,sigma_bar_sq\n";
    for (const SweepRunRecord& r : out.runs)
      for (const SlotRecord& row : r.sigma_rows)
        body += run_prefix(r) + "," + std::to_string(row.station) + "," +
                std::to_string(row.slot) + "," +
                format_double(row.sigma_bar_sq) + "\n";
    write_text_file(out.dir / "sigma_vs_t.csv", body);
  }
  return out;
}

struct ScalingOutput {
  std::filesystem::path dir;
  ScalingResult result;
};

// cmd_scaling: the regret-scaling experiment over the sweep's T grid.
inline ScalingOutput run_scaling(const ExperimentSpec& spec, int workers,
                                 const std::filesystem::path& out_base) {
  if (spec.sweep_horizons.empty())
    throw ValidationError("scaling requires a [sweep] T grid");
  validate_scaling_grid(spec.sweep_horizons, spec.replicate_seeds);
  ScalingOutput out;
  out.dir = out_base / ("scaling-" + detail::spec_hash(spec));
  std::filesystem::create_directories(out.dir);
  out.result = regret_scaling_experiment(spec.base, spec.sweep_horizons,
                                         spec.replicate_seeds, workers);

  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "scaling";
  j["base_config"] = config_json(spec.base);
  j["policy"] = policy_name(out.result.policy);
  j["T"] = out.result.horizons;
  j["seeds"] = out.result.seeds;
  j["mean_regret"] = out.result.mean_regret;
  j["fitted_exponent"] = out.result.fitted_exponent;
  write_text_file(out.dir / "scaling.json", j.dump(2) + "\n");

  std::string body = "T,policy,seed,final_cum_regret\n";
  for (std::size_t ti = 0; ti < out.result.horizons.size(); ++ti)
    for (int si = 0; si < out.result.seeds; ++si)
      body += std::to_string(out.result.horizons[ti]) + "," +
              policy_name(out.result.policy) + "," +
              std::to_string(spec.base.seed + static_cast<std::uint64_t>(si)) +
              "," +
              format_double(
                  out.result.per_run_regret[ti * out.result.seeds + si]) +
              "\n";
  write_text_file(out.dir / "regret_vs_T.csv", body);
  return out;
}

}  // namespace recache
