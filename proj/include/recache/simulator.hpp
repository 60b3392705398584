#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "recache/baselines.hpp"
#include "recache/demand.hpp"
#include "recache/estimators.hpp"
#include "recache/federation.hpp"
#include "recache/optimizer.hpp"
#include "recache/parallel.hpp"
#include "recache/ptm_io.hpp"
#include "recache/rng.hpp"
#include "recache/scenario.hpp"
#include "recache/types.hpp"

namespace recache {

enum class Policy {
  bayes,         // Dirichlet posterior sampling, full joint optimization
  point_genie,   // frequency estimate refreshed and exploited every slot
  point_etc,     // i.i.d. exploration, then commit to the frozen estimate
  bayes_norec,   // Bayesian caching with random (non-optimized) recommendations
  random_strategy,
  oracle,        // plays the benchmark strategy computed from the true PTM
  lru,
  lfu,
  lrfu,
};

inline const char* policy_name(Policy p) {
  switch (p) {
    case Policy::bayes: return "bayes";
    case Policy::point_genie: return "point_genie";
    case Policy::point_etc: return "point_etc";
    case Policy::bayes_norec: return "bayes_norec";
    case Policy::random_strategy: return "random";
    case Policy::oracle: return "oracle";
    case Policy::lru: return "lru";
    case Policy::lfu: return "lfu";
    case Policy::lrfu: return "lrfu";
  }
  return "?";
}

inline std::optional<Policy> parse_policy(std::string_view name) {
  for (Policy p : {Policy::bayes, Policy::point_genie, Policy::point_etc,
                   Policy::bayes_norec, Policy::random_strategy, Policy::oracle,
                   Policy::lru, Policy::lfu, Policy::lrfu})
    if (name == policy_name(p)) return p;
  return std::nullopt;
}

struct EstimatorParams {
  double prior_pseudocount = 1.0;
  long exploration_horizon = 0;  // 0 = auto: ceil(T^(2/3))
};

struct FusionParams {
  WeightMode mode = WeightMode::time_decay;
  double lambda = 0.5;  // own weight in static mode
};

struct PtmParams {
  enum class Source { random, identity, uniform, csv };
  Source source = Source::random;
  bool shared = true;
  double concentration = 1.0;   // Dirichlet parameter for random columns
  double perturbation = 0.0;    // station blend toward an independent draw
  std::vector<std::string> files;  // csv paths: one per station, or one shared
};

struct BaselineParams {
  double lrfu_decay = 0.5;
};

struct RunConfig {
  int files = 4;
  int cache_budget = 1;
  int rec_budget = 1;
  long users = 10;
  int stations = 1;
  long horizon = 100;
  Policy policy = Policy::bayes;
  std::uint64_t seed = 1;
  EstimatorParams estimator;
  OptimizerConfig optimizer;
  FusionParams fusion;
  ScenarioParams scenario;
  PtmParams ptm;
  BaselineParams baseline;
  bool capture_demands = false;  // test hook: record per-slot demand totals
};

inline void validate(const RunConfig& cfg) {
  if (cfg.files < 1) throw ValidationError("file_count >= 1");
  if (cfg.cache_budget < 1) throw ValidationError("cache_budget >= 1");
  if (cfg.cache_budget > cfg.files) throw ValidationError("cache_budget <= F");
  if (cfg.rec_budget < 1) throw ValidationError("rec_budget >= 1");
  if (cfg.rec_budget > cfg.files) throw ValidationError("rec_budget <= F");
  if (cfg.users < 1) throw ValidationError("user_count >= 1");
  if (cfg.stations < 1) throw ValidationError("station_count >= 1");
  if (cfg.horizon < 1) throw ValidationError("horizon >= 1");
  if (cfg.estimator.prior_pseudocount < 0.0)
    throw ValidationError("prior_pseudocount >= 0");
  if (cfg.estimator.exploration_horizon < 0)
    throw ValidationError("exploration_horizon >= 0");
  if (cfg.optimizer.restarts < 1) throw ValidationError("restarts >= 1");
  if (cfg.optimizer.max_alternations < 1)
    throw ValidationError("max_alternations >= 1");
  if (cfg.fusion.lambda < 0.0 || cfg.fusion.lambda > 1.0)
    throw ValidationError("fusion lambda in [0,1]");
  if (cfg.ptm.source == PtmParams::Source::random) {
    if (!(cfg.ptm.concentration > 0.0))
      throw ValidationError("ptm concentration > 0");
    if (cfg.ptm.perturbation < 0.0 || cfg.ptm.perturbation > 1.0)
      throw ValidationError("ptm perturbation in [0,1]");
    if (cfg.ptm.shared && cfg.ptm.perturbation != 0.0)
      throw ValidationError("ptm perturbation requires ptm shared = false");
  }
  if (cfg.ptm.source == PtmParams::Source::csv) {
    if (cfg.ptm.files.empty())
      throw ValidationError("ptm csv source requires files");
    if (cfg.ptm.files.size() != 1 &&
        cfg.ptm.files.size() != static_cast<std::size_t>(cfg.stations))
      throw ValidationError("ptm files count is 1 or station_count");
  }
  if (!(cfg.scenario.area_radius_m > 0.0))
    throw ValidationError("area_radius > 0");
  if (!(cfg.scenario.tx_power_w > 0.0)) throw ValidationError("tx_power > 0");
  if (!(cfg.scenario.noise_w > 0.0)) throw ValidationError("noise > 0");
  if (!(cfg.scenario.path_loss_exponent > 0.0))
    throw ValidationError("path_loss_exponent > 0");
  if (!(cfg.scenario.min_distance_m > 0.0))
    throw ValidationError("min_distance > 0");
  if (cfg.scenario.miss_penalty_alpha < 0.0)
    throw ValidationError("miss_penalty_alpha >= 0");
  if (cfg.scenario.rate_threshold_bits < 0.0)
    throw ValidationError("rate_threshold >= 0");
  if (cfg.baseline.lrfu_decay < 0.0) throw ValidationError("lrfu_decay >= 0");
}

struct SlotRecord {
  long slot = 0;
  int station = 0;
  double expected_hit = 0.0;
  double realized_hit = 0.0;
  double cum_regret = 0.0;
  double delay = 0.0;
  double throughput = 0.0;
  double sigma_bar_sq = 0.0;
};

struct StationSummary {
  int station = 0;
  long users = 0;
  double benchmark_value = 0.0;
  bool benchmark_exact = true;
  double final_cum_regret = 0.0;
  double mean_expected_hit = 0.0;
  double mean_realized_hit = 0.0;
  double final_quarter_expected_hit = 0.0;
  double final_quarter_realized_hit = 0.0;
  double mean_delay = 0.0;
  double mean_throughput = 0.0;
};

struct RunMetrics {
  std::vector<SlotRecord> rows;  // slot-major, station-minor
  std::vector<StationSummary> stations;
  std::vector<std::vector<std::uint64_t>> demands;  // when capture_demands
};

// Substream tags; each (tag, station, slot) tuple owns an independent RNG so
// draws match across policies whenever the strategies coincide.
enum StreamTag : std::uint64_t {
  kStreamTopology = 1,
  kStreamPtm,
  kStreamBenchmark,
  kStreamDemand,
  kStreamRecDraw,
  kStreamCacheDraw,
  kStreamOptimize,
  kStreamBayes,
};

namespace detail {

// i.i.d. Bernoulli(prob) indicator repaired to the budget: surplus picks are
// dropped uniformly at random; an all-zero recommendation draw recommends one
// uniform file instead, since a slot must recommend something.
inline std::vector<double> random_feasible(int files, int budget, double prob,
                                           bool force_nonzero, Rng& rng) {
  std::bernoulli_distribution coin(prob);
  std::vector<int> picked;
  for (int i = 0; i < files; ++i)
    if (coin(rng)) picked.push_back(i);
  while (static_cast<int>(picked.size()) > budget) {
    std::uniform_int_distribution<std::size_t> drop(0, picked.size() - 1);
    picked.erase(picked.begin() + static_cast<std::ptrdiff_t>(drop(rng)));
  }
  std::vector<double> x(files, 0.0);
  if (picked.empty() && force_nonzero) {
    std::uniform_int_distribution<int> one(0, files - 1);
    x[one(rng)] = 1.0;
    return x;
  }
  for (int i : picked) x[i] = 1.0;
  return x;
}

inline Ptm random_stochastic(int files, double concentration, Rng& rng) {
  std::vector<double> entries(static_cast<std::size_t>(files) * files);
  const std::vector<double> alphas(files, concentration);
  for (int j = 0; j < files; ++j) {
    const std::vector<double> col = dirichlet_draw(alphas, rng);
    std::copy(col.begin(), col.end(),
              entries.begin() + static_cast<std::size_t>(j) * files);
  }
  return Ptm(files, std::move(entries));
}

inline Ptm blend(const Ptm& a, const Ptm& b, double weight_b) {
  const auto da = a.data();
  const auto db = b.data();
  std::vector<double> entries(da.size());
  for (std::size_t n = 0; n < entries.size(); ++n)
    entries[n] = (1.0 - weight_b) * da[n] + weight_b * db[n];
  return Ptm(a.files(), std::move(entries));
}

}  // namespace detail

// True PTMs, one per station, per the configured source.
inline std::vector<Ptm> make_ptms(const RunConfig& cfg) {
  const int files = cfg.files;
  const int stations = cfg.stations;
  std::vector<Ptm> out;
  out.reserve(static_cast<std::size_t>(stations));
  switch (cfg.ptm.source) {
    case PtmParams::Source::identity:
      for (int k = 0; k < stations; ++k) out.push_back(Ptm::identity(files));
      return out;
    case PtmParams::Source::uniform:
      for (int k = 0; k < stations; ++k) out.push_back(Ptm::uniform(files));
      return out;
    case PtmParams::Source::csv: {
      if (cfg.ptm.files.size() == 1) {
        Ptm p = load_ptm_csv(cfg.ptm.files[0]);
        if (p.files() != files)
          throw ValidationError("ptm csv dimension must equal F");
        for (int k = 0; k < stations; ++k) out.push_back(p);
      } else {
        for (int k = 0; k < stations; ++k) {
          out.push_back(load_ptm_csv(cfg.ptm.files[k]));
          if (out.back().files() != files)
            throw ValidationError("ptm csv dimension must equal F");
        }
      }
      return out;
    }
    case PtmParams::Source::random:
      break;
  }
  Rng base_rng = substream_rng(cfg.seed, kStreamPtm, std::uint64_t{0});
  Ptm base = detail::random_stochastic(files, cfg.ptm.concentration, base_rng);
  for (int k = 0; k < stations; ++k) {
    if (cfg.ptm.shared || k == 0) {
      out.push_back(base);
      continue;
    }
    Rng krng = substream_rng(cfg.seed, kStreamPtm, static_cast<std::uint64_t>(k));
    Ptm other = detail::random_stochastic(files, cfg.ptm.concentration, krng);
    out.push_back(cfg.ptm.perturbation > 0.0
                      ? detail::blend(base, other, cfg.ptm.perturbation)
                      : std::move(other));
  }
  return out;
}

struct BenchmarkStrategy {
  Strategy strategy;
  double value = 0.0;
  bool exact = true;
};

// Optimal fixed strategy against the true PTM: exhaustive when the
// enumeration guard permits, otherwise the alternating solver with 64
// restarts, flagged approximate.
inline BenchmarkStrategy benchmark_strategy(const Ptm& truth,
                                            const ConstraintSet& cs, Rng& rng) {
  BenchmarkStrategy b;
  const double combos = detail::choose(cs.files, cs.cache_budget) *
                        detail::choose(cs.files, cs.rec_budget);
  if (combos <= 1e6) {
    SolveResult res = exhaustive_solve(truth, cs);
    b.strategy = std::move(res.strategy);
    b.value = res.value;
    b.exact = true;
  } else {
    OptimizerConfig cfg;
    cfg.restarts = 64;
    SolveResult res = solve(truth, cs, cfg, rng);
    b.strategy = std::move(res.strategy);
    b.value = res.value;
    b.exact = false;
  }
  return b;
}

// One slotted simulation. Every stochastic component draws from a substream
// keyed by (seed, tag, station, slot), so a (config, seed) pair is
// bit-reproducible and demand draws are shared across policies wherever the
// strategies coincide.
inline RunMetrics run(const RunConfig& cfg) {
  validate(cfg);
  const int files = cfg.files;
  const int stations = cfg.stations;
  const long horizon = cfg.horizon;
  const ConstraintSet cs(files, cfg.cache_budget, cfg.rec_budget);
  const double p_explore = cs.cache_fraction();
  const double q_explore = cs.rec_fraction();
  const bool sinr_mode = cfg.scenario.mode == ScenarioMode::sinr;

  Rng topo_rng = substream_rng(cfg.seed, kStreamTopology);
  const ScenarioTopology topo = build_scenario(
      stations, static_cast<int>(cfg.users), cfg.scenario, topo_rng);
  std::vector<std::vector<int>> members(stations);
  for (int u = 0; u < topo.users; ++u) members[topo.serving[u]].push_back(u);

  const std::vector<Ptm> truth = make_ptms(cfg);

  std::vector<BenchmarkStrategy> bench;
  bench.reserve(static_cast<std::size_t>(stations));
  for (int k = 0; k < stations; ++k) {
    Rng rng = substream_rng(cfg.seed, kStreamBenchmark,
                            static_cast<std::uint64_t>(k));
    bench.push_back(benchmark_strategy(truth[k], cs, rng));
  }

  const Policy policy = cfg.policy;
  const bool cache_policy = policy == Policy::lru || policy == Policy::lfu ||
                            policy == Policy::lrfu;
  const bool learns = policy == Policy::bayes || policy == Policy::point_genie ||
                      policy == Policy::point_etc ||
                      policy == Policy::bayes_norec;
  const bool point_based =
      policy == Policy::point_genie || policy == Policy::point_etc;

  long explore_horizon = cfg.estimator.exploration_horizon;
  if (policy == Policy::point_etc && explore_horizon == 0)
    explore_horizon = static_cast<long>(
        std::ceil(std::pow(static_cast<double>(horizon), 2.0 / 3.0)));

  std::vector<DemandMatrix> dm;
  dm.reserve(static_cast<std::size_t>(stations));
  for (int k = 0; k < stations; ++k)
    dm.emplace_back(files, static_cast<long>(members[k].size()));

  std::vector<CachePolicyState> caches;
  if (cache_policy) {
    const CacheReplacement repl = policy == Policy::lru ? CacheReplacement::lru
                                  : policy == Policy::lfu
                                      ? CacheReplacement::lfu
                                      : CacheReplacement::lrfu;
    for (int k = 0; k < stations; ++k)
      caches.emplace_back(repl, cfg.cache_budget, cfg.baseline.lrfu_decay);
  }

  FusionWeights weights;
  if (learns && stations > 1)
    weights = schedule_weights(stations, horizon, cfg.fusion.mode,
                               cfg.fusion.lambda);

  auto draw_v = [&](int k, long slot) {
    Rng rng = substream_rng(cfg.seed, kStreamRecDraw,
                            static_cast<std::uint64_t>(k),
                            static_cast<std::uint64_t>(slot));
    return detail::random_feasible(files, cfg.rec_budget, q_explore, true, rng);
  };
  auto draw_u = [&](int k, long slot) {
    Rng rng = substream_rng(cfg.seed, kStreamCacheDraw,
                            static_cast<std::uint64_t>(k),
                            static_cast<std::uint64_t>(slot));
    return detail::random_feasible(files, cfg.cache_budget, p_explore, false,
                                   rng);
  };

  // Strategies in force at slot 0 (Algorithm 1, lines 2-3).
  std::vector<Strategy> strat(stations);
  std::vector<std::optional<Strategy>> committed(stations);
  for (int k = 0; k < stations; ++k) {
    if (policy == Policy::oracle) {
      strat[k] = bench[k].strategy;
    } else if (cache_policy) {
      strat[k].cache.assign(files, 0.0);
      strat[k].recommend = draw_v(k, 0);
    } else {
      strat[k].cache = draw_u(k, 0);
      strat[k].recommend = draw_v(k, 0);
    }
  }

  RunMetrics rm;
  rm.rows.reserve(static_cast<std::size_t>(horizon) * stations);
  if (cfg.capture_demands)
    rm.demands.reserve(static_cast<std::size_t>(horizon) * stations);
  std::vector<double> cum_regret(stations, 0.0);

  std::vector<Ptm> estimates;
  for (long t = 0; t < horizon; ++t) {
    for (int k = 0; k < stations; ++k) {
      const long n_users = static_cast<long>(members[k].size());
      if (cache_policy) strat[k].cache = caches[k].cache_indicator(files);

      Rng demand_rng = substream_rng(cfg.seed, kStreamDemand,
                                     static_cast<std::uint64_t>(k),
                                     static_cast<std::uint64_t>(t));
      const SlotDemand sd =
          generate_demands(truth[k], strat[k], n_users, t, demand_rng);
      if (cfg.capture_demands) rm.demands.push_back(sd.demand.counts);

      SlotRecord row;
      row.slot = t;
      row.station = k;
      row.expected_hit = expected_hit(truth[k], strat[k]);

      long hits = 0;
      double delay_sum = 0.0, throughput_sum = 0.0;
      for (std::size_t n = 0; n < sd.picks.size(); ++n) {
        const int requested = sd.picks[n].first;
        bool hit;
        if (cache_policy) {
          hit = caches[k].access(requested, t) == AccessResult::hit;
        } else {
          hit = strat[k].cache[requested] == 1.0;
        }
        hits += hit ? 1 : 0;
        if (sinr_mode) {
          const double s = topo.sinr_at(k, members[k][n]);
          const double d = slot_delay(s, hit, cfg.scenario.miss_penalty_alpha,
                                      cfg.scenario.log_base);
          delay_sum += d;
          throughput_sum += cfg.scenario.rate_threshold_bits / d;
        }
      }
      row.realized_hit =
          n_users > 0 ? static_cast<double>(hits) / n_users : 0.0;
      if (sinr_mode && n_users > 0) {
        row.delay = delay_sum / n_users;
        row.throughput = throughput_sum / n_users;
      }

      cum_regret[k] += bench[k].value - row.expected_hit;
      row.cum_regret = cum_regret[k];

      update_demand_matrix(dm[k], sd, strat[k].recommend);
      row.sigma_bar_sq = sigma_bar_sq(dm[k]);
      rm.rows.push_back(row);
    }

    if (t + 1 >= horizon) break;

    // Choose the strategies for slot t+1.
    switch (policy) {
      case Policy::oracle:
        break;
      case Policy::random_strategy:
        for (int k = 0; k < stations; ++k) {
          strat[k].cache = draw_u(k, t + 1);
          strat[k].recommend = draw_v(k, t + 1);
        }
        break;
      case Policy::lru:
      case Policy::lfu:
      case Policy::lrfu:
        for (int k = 0; k < stations; ++k) strat[k].recommend = draw_v(k, t + 1);
        break;
      case Policy::point_etc:
        if (t + 1 < explore_horizon) {
          for (int k = 0; k < stations; ++k) {
            strat[k].cache = draw_u(k, t + 1);
            strat[k].recommend = draw_v(k, t + 1);
          }
          break;
        }
        if (!committed[0]) {
          estimates.clear();
          for (int k = 0; k < stations; ++k)
            estimates.push_back(point_estimate(dm[k]));
          for (int k = 0; k < stations; ++k) {
            const Ptm est = stations > 1 ? fuse(estimates, weights.row(k))
                                         : estimates[k];
            Rng rng = substream_rng(cfg.seed, kStreamOptimize,
                                    static_cast<std::uint64_t>(k),
                                    static_cast<std::uint64_t>(t));
            committed[k] = solve(est, cs, cfg.optimizer, rng).strategy;
          }
        }
        for (int k = 0; k < stations; ++k) strat[k] = *committed[k];
        break;
      case Policy::bayes:
      case Policy::point_genie:
      case Policy::bayes_norec: {
        estimates.clear();
        for (int k = 0; k < stations; ++k) {
          if (point_based) {
            estimates.push_back(point_estimate(dm[k]));
          } else {
            Rng rng = substream_rng(cfg.seed, kStreamBayes,
                                    static_cast<std::uint64_t>(k),
                                    static_cast<std::uint64_t>(t));
            estimates.push_back(
                bayes_sample(dm[k], cfg.estimator.prior_pseudocount, rng));
          }
        }
        for (int k = 0; k < stations; ++k) {
          const Ptm est =
              stations > 1 ? fuse(estimates, weights.row(k)) : estimates[k];
          if (policy == Policy::bayes_norec) {
            strat[k].recommend = draw_v(k, t + 1);
            strat[k].cache = best_response_cache(est, strat[k].recommend,
                                                 cfg.cache_budget);
          } else {
            Rng rng = substream_rng(cfg.seed, kStreamOptimize,
                                    static_cast<std::uint64_t>(k),
                                    static_cast<std::uint64_t>(t));
            strat[k] = solve(est, cs, cfg.optimizer, rng).strategy;
          }
        }
        break;
      }
    }
  }

  // Summaries.
  rm.stations.resize(static_cast<std::size_t>(stations));
  const long quarter_start = horizon - (horizon + 3) / 4;
  for (int k = 0; k < stations; ++k) {
    StationSummary& s = rm.stations[k];
    s.station = k;
    s.users = static_cast<long>(members[k].size());
    s.benchmark_value = bench[k].value;
    s.benchmark_exact = bench[k].exact;
    s.final_cum_regret = cum_regret[k];
    double exp_sum = 0.0, real_sum = 0.0, delay_sum = 0.0, thr_sum = 0.0;
    double q_exp = 0.0, q_real = 0.0;
    long q_count = 0;
    for (long t = 0; t < horizon; ++t) {
      const SlotRecord& row = rm.rows[static_cast<std::size_t>(t) * stations + k];
      exp_sum += row.expected_hit;
      real_sum += row.realized_hit;
      delay_sum += row.delay;
      thr_sum += row.throughput;
      if (t >= quarter_start) {
        q_exp += row.expected_hit;
        q_real += row.realized_hit;
        ++q_count;
      }
    }
    s.mean_expected_hit = exp_sum / horizon;
    s.mean_realized_hit = real_sum / horizon;
    s.mean_delay = delay_sum / horizon;
    s.mean_throughput = thr_sum / horizon;
    s.final_quarter_expected_hit = q_count > 0 ? q_exp / q_count : 0.0;
    s.final_quarter_realized_hit = q_count > 0 ? q_real / q_count : 0.0;
  }
  return rm;
}

struct ScalingResult {
  Policy policy = Policy::bayes;
  std::vector<long> horizons;
  std::vector<double> mean_regret;  // station-mean final regret, seed-averaged
  std::vector<double> per_run_regret;  // horizon-major, seed-minor
  int seeds = 0;
  double fitted_exponent = 0.0;
};

inline double fit_loglog_slope(std::span<const double> x,
                               std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n)
    throw ValidationError("slope fit needs >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::max(y[i], 1e-12));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline void validate_scaling_grid(std::span<const long> horizons,
                                  int n_seeds) {
  if (horizons.size() < 5)
    throw ValidationError("scaling grid needs >= 5 horizons");
  const auto [lo, hi] = std::minmax_element(horizons.begin(), horizons.end());
  if (*lo < 1) throw ValidationError("horizon >= 1");
  if (std::log10(static_cast<double>(*hi) / static_cast<double>(*lo)) < 1.5)
    throw ValidationError("scaling grid spans >= 1.5 decades");
  if (n_seeds < 10) throw ValidationError("scaling needs >= 10 seeds");
}

// Runs the configured policy over a horizon grid and fits the regret-growth
// exponent: the least-squares slope of log(mean final regret) vs log(T).
inline ScalingResult regret_scaling_experiment(const RunConfig& base,
                                               std::span<const long> horizons,
                                               int n_seeds, int workers = 1) {
  validate_scaling_grid(horizons, n_seeds);

  const int n_t = static_cast<int>(horizons.size());
  std::vector<double> totals(static_cast<std::size_t>(n_t) * n_seeds, 0.0);
  parallel_for(n_t * n_seeds, workers, [&](int task) {
    const int ti = task / n_seeds;
    const int si = task % n_seeds;
    RunConfig cfg = base;
    cfg.horizon = horizons[ti];
    cfg.seed = base.seed + static_cast<std::uint64_t>(si);
    const RunMetrics rm = run(cfg);
    double reg = 0.0;
    for (const StationSummary& s : rm.stations) reg += s.final_cum_regret;
    totals[task] = reg / static_cast<double>(rm.stations.size());
  });

  ScalingResult out;
  out.policy = base.policy;
  out.horizons.assign(horizons.begin(), horizons.end());
  out.seeds = n_seeds;
  out.per_run_regret = totals;
  out.mean_regret.resize(horizons.size());
  std::vector<double> xs(horizons.size());
  for (int ti = 0; ti < n_t; ++ti) {
    double sum = 0.0;
    for (int si = 0; si < n_seeds; ++si)
      sum += totals[static_cast<std::size_t>(ti) * n_seeds + si];
    out.mean_regret[ti] = sum / n_seeds;
    xs[ti] = static_cast<double>(horizons[ti]);
  }
  out.fitted_exponent = fit_loglog_slope(xs, out.mean_regret);
  return out;
}

}  // namespace recache
