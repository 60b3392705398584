#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "recache/simulator.hpp"

namespace recache {

// A base run plus optional sweep axes over T, lambda, c and policy, executed
// for `replicate_seeds` consecutive seeds.
struct ExperimentSpec {
  RunConfig base;
  std::vector<long> sweep_horizons;
  std::vector<double> sweep_lambda;
  std::vector<int> sweep_cache;
  std::vector<Policy> sweep_policy;
  int replicate_seeds = 1;
  long max_runs = 10000;
  std::string out_dir = "results";
};

inline long sweep_size(const ExperimentSpec& spec) {
  auto axis = [](std::size_t n) { return static_cast<long>(std::max<std::size_t>(n, 1)); };
  return axis(spec.sweep_horizons.size()) * axis(spec.sweep_lambda.size()) *
         axis(spec.sweep_cache.size()) * axis(spec.sweep_policy.size()) *
         spec.replicate_seeds;
}

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct ConfigCursor {
  std::string origin;
  int line = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(origin + ":" + std::to_string(line) + ": " + what);
  }

  long parse_long(const std::string& v) const {
    try {
      std::size_t pos = 0;
      const long x = std::stol(v, &pos);
      if (pos != v.size()) fail("not an integer: '" + v + "'");
      return x;
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      fail("not an integer: '" + v + "'");
    }
  }

  std::uint64_t parse_u64(const std::string& v) const {
    try {
      std::size_t pos = 0;
      const unsigned long long x = std::stoull(v, &pos);
      if (pos != v.size()) fail("not an unsigned integer: '" + v + "'");
      return x;
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      fail("not an unsigned integer: '" + v + "'");
    }
  }

  double parse_double(const std::string& v) const {
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) fail("not a number: '" + v + "'");
      return x;
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      fail("not a number: '" + v + "'");
    }
  }

  bool parse_bool(const std::string& v) const {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail("not a boolean: '" + v + "'");
  }

  Policy parse_policy_value(const std::string& v) const {
    const auto p = parse_policy(v);
    if (!p) fail("unknown policy: '" + v + "'");
    return *p;
  }
};

}  // namespace detail

// Parses the plain-text key = value configuration. Sections group the
// estimator/optimizer/fusion/scenario/ptm/baseline/sweep/output keys; '#'
// starts a comment; unknown sections or keys are hard errors.
inline ExperimentSpec parse_config_text(const std::string& text,
                                        const std::string& origin = "<config>") {
  ExperimentSpec spec;
  RunConfig& cfg = spec.base;
  detail::ConfigCursor cur{origin, 0};
  std::string section;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++cur.line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') cur.fail("malformed section header");
      section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
      if (section != "estimator" && section != "optimizer" &&
          section != "fusion" && section != "scenario" && section != "ptm" &&
          section != "baseline" && section != "sweep" && section != "output")
        cur.fail("unknown section '" + section + "'");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) cur.fail("expected key = value");
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) cur.fail("empty key");
    if (value.empty()) cur.fail("empty value for key '" + key + "'");

    if (section.empty()) {
      if (key == "F") cfg.files = static_cast<int>(cur.parse_long(value));
      else if (key == "c") cfg.cache_budget = static_cast<int>(cur.parse_long(value));
      else if (key == "r") cfg.rec_budget = static_cast<int>(cur.parse_long(value));
      else if (key == "N") cfg.users = cur.parse_long(value);
      else if (key == "M") cfg.stations = static_cast<int>(cur.parse_long(value));
      else if (key == "T") cfg.horizon = cur.parse_long(value);
      else if (key == "policy") cfg.policy = cur.parse_policy_value(value);
      else if (key == "seed") cfg.seed = cur.parse_u64(value);
      else cur.fail("unknown key '" + key + "'");
    } else if (section == "estimator") {
      if (key == "prior") cfg.estimator.prior_pseudocount = cur.parse_double(value);
      else if (key == "exploration_horizon")
        cfg.estimator.exploration_horizon = cur.parse_long(value);
      else cur.fail("unknown key '" + key + "' in [estimator]");
    } else if (section == "optimizer") {
      if (key == "restarts") cfg.optimizer.restarts = static_cast<int>(cur.parse_long(value));
      else if (key == "max_alternations")
        cfg.optimizer.max_alternations = static_cast<int>(cur.parse_long(value));
      else if (key == "tie_break") {
        if (value != "lowest_index") cur.fail("unknown tie_break '" + value + "'");
        cfg.optimizer.tie_break = OptimizerConfig::TieBreak::lowest_index;
      } else cur.fail("unknown key '" + key + "' in [optimizer]");
    } else if (section == "fusion") {
      if (key == "mode") {
        if (value == "static") cfg.fusion.mode = WeightMode::static_lambda;
        else if (value == "time_decay") cfg.fusion.mode = WeightMode::time_decay;
        else cur.fail("unknown fusion mode '" + value + "'");
      } else if (key == "lambda") cfg.fusion.lambda = cur.parse_double(value);
      else cur.fail("unknown key '" + key + "' in [fusion]");
    } else if (section == "scenario") {
      if (key == "mode") {
        if (value == "fixed_link") cfg.scenario.mode = ScenarioMode::fixed_link;
        else if (value == "sinr") cfg.scenario.mode = ScenarioMode::sinr;
        else cur.fail("unknown scenario mode '" + value + "'");
      } else if (key == "area_radius") cfg.scenario.area_radius_m = cur.parse_double(value);
      else if (key == "sinr_threshold_db")
        cfg.scenario.sinr_threshold_db = cur.parse_double(value);
      else if (key == "miss_penalty_alpha")
        cfg.scenario.miss_penalty_alpha = cur.parse_double(value);
      else if (key == "rate_threshold_bits")
        cfg.scenario.rate_threshold_bits = cur.parse_double(value);
      else if (key == "tx_power_w") cfg.scenario.tx_power_w = cur.parse_double(value);
      else if (key == "noise_w") cfg.scenario.noise_w = cur.parse_double(value);
      else if (key == "path_loss_exponent")
        cfg.scenario.path_loss_exponent = cur.parse_double(value);
      else if (key == "min_distance_m")
        cfg.scenario.min_distance_m = cur.parse_double(value);
      else if (key == "log_base") {
        if (value == "log2") cfg.scenario.log_base = LogBase::base2;
        else if (value == "ln") cfg.scenario.log_base = LogBase::natural;
        else cur.fail("unknown log_base '" + value + "'");
      } else cur.fail("unknown key '" + key + "' in [scenario]");
    } else if (section == "ptm") {
      if (key == "source") {
        if (value == "random") cfg.ptm.source = PtmParams::Source::random;
        else if (value == "identity") cfg.ptm.source = PtmParams::Source::identity;
        else if (value == "uniform") cfg.ptm.source = PtmParams::Source::uniform;
        else if (value == "csv") cfg.ptm.source = PtmParams::Source::csv;
        else cur.fail("unknown ptm source '" + value + "'");
      } else if (key == "shared") cfg.ptm.shared = cur.parse_bool(value);
      else if (key == "concentration") cfg.ptm.concentration = cur.parse_double(value);
      else if (key == "perturbation") cfg.ptm.perturbation = cur.parse_double(value);
      else if (key == "files") cfg.ptm.files = detail::split_list(value);
      else cur.fail("unknown key '" + key + "' in [ptm]");
    } else if (section == "baseline") {
      if (key == "lrfu_lambda") cfg.baseline.lrfu_decay = cur.parse_double(value);
      else cur.fail("unknown key '" + key + "' in [baseline]");
    } else if (section == "sweep") {
      if (key == "T") {
        spec.sweep_horizons.clear();
        for (const auto& v : detail::split_list(value))
          spec.sweep_horizons.push_back(cur.parse_long(v));
      } else if (key == "lambda") {
        spec.sweep_lambda.clear();
        for (const auto& v : detail::split_list(value))
          spec.sweep_lambda.push_back(cur.parse_double(v));
      } else if (key == "c") {
        spec.sweep_cache.clear();
        for (const auto& v : detail::split_list(value))
          spec.sweep_cache.push_back(static_cast<int>(cur.parse_long(v)));
      } else if (key == "policy") {
        spec.sweep_policy.clear();
        for (const auto& v : detail::split_list(value))
          spec.sweep_policy.push_back(cur.parse_policy_value(v));
      } else if (key == "seeds") {
        spec.replicate_seeds = static_cast<int>(cur.parse_long(value));
      } else if (key == "max_runs") {
        spec.max_runs = cur.parse_long(value);
      } else cur.fail("unknown key '" + key + "' in [sweep]");
    } else if (section == "output") {
      if (key == "dir") spec.out_dir = value;
      else cur.fail("unknown key '" + key + "' in [output]");
    }
  }

  // Validate the base run and every axis value individually.
  validate(spec.base);
  for (long t : spec.sweep_horizons)
    if (t < 1) throw ValidationError("horizon >= 1");
  for (double l : spec.sweep_lambda)
    if (l < 0.0 || l > 1.0) throw ValidationError("fusion lambda in [0,1]");
  for (int c : spec.sweep_cache) {
    if (c < 1) throw ValidationError("cache_budget >= 1");
    if (c > spec.base.files) throw ValidationError("cache_budget <= F");
  }
  if (spec.replicate_seeds < 1) throw ValidationError("seeds >= 1");
  if (spec.max_runs < 1) throw ValidationError("max_runs >= 1");
  if (sweep_size(spec) > spec.max_runs)
    throw ValidationError("sweep size <= max_runs (" +
                          std::to_string(sweep_size(spec)) + " > " +
                          std::to_string(spec.max_runs) + ")");
  return spec;
}

inline ExperimentSpec parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

}  // namespace recache
