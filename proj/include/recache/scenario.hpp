#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "recache/errors.hpp"
#include "recache/rng.hpp"

namespace recache {

enum class ScenarioMode { fixed_link, sinr };
enum class LogBase { base2, natural };

// Radio model constants for the SINR scenario. The paper names fading, path
// loss and transmit power without formulas; this model is ours: received
// power = tx_power * h * d^-eta with h ~ Exp(1) (Rayleigh power fading),
// interference from all other stations, link up iff SINR >= threshold.
struct ScenarioParams {
  ScenarioMode mode = ScenarioMode::fixed_link;
  double area_radius_m = 500.0;
  double sinr_threshold_db = 12.0;
  double miss_penalty_alpha = 10.0;
  double rate_threshold_bits = 1.0;
  double tx_power_w = 1.0;
  double noise_w = 1e-13;  // thermal scale; 1e-6 leaves a 500 m cell dark
  double path_loss_exponent = 3.5;
  double min_distance_m = 1.0;
  LogBase log_base = LogBase::base2;
};

struct ScenarioTopology {
  int stations = 1;
  int users = 0;
  ScenarioMode mode = ScenarioMode::fixed_link;
  std::vector<std::uint8_t> link;  // row-major M x U, 1 = can communicate
  std::vector<double> sinr;        // linear scale; empty in fixed_link mode
  std::vector<int> serving;        // serving station per user
  double area_radius_m = 500.0;
  double sinr_threshold_db = 12.0;
  double miss_penalty_alpha = 10.0;

  bool connected(int station, int user) const {
    return link[static_cast<std::size_t>(station) * users + user] != 0;
  }

  double sinr_at(int station, int user) const {
    return sinr[static_cast<std::size_t>(station) * users + user];
  }

  std::vector<int> station_members(int station) const {
    std::vector<int> out;
    for (int u = 0; u < users; ++u)
      if (serving[u] == station) out.push_back(u);
    return out;
  }
};

inline double log_term(double sinr_linear, LogBase base) {
  return base == LogBase::base2 ? std::log2(1.0 + sinr_linear)
                                : std::log(1.0 + sinr_linear);
}

// Downlink delay tau = 1/log(1+SINR); a miss adds the backhaul fetch, for an
// overall (alpha + 1) tau.
inline double slot_delay(double sinr_linear, bool hit, double alpha,
                         LogBase base = LogBase::base2) {
  if (!(sinr_linear > 0.0)) throw InvalidSinr("sinr must be > 0");
  const double l = log_term(sinr_linear, base);
  if (!(l > 0.0)) throw InvalidSinr("log(1 + sinr) must be > 0");
  const double tau = 1.0 / l;
  return hit ? tau : (alpha + 1.0) * tau;
}

// Link throughput R log(1+SINR) bits/second for rate threshold R.
inline double slot_throughput(double rate_threshold, double sinr_linear,
                              LogBase base = LogBase::base2) {
  if (!(sinr_linear > 0.0)) throw InvalidSinr("sinr must be > 0");
  return rate_threshold * log_term(sinr_linear, base);
}

namespace detail {

struct Point {
  double x = 0.0, y = 0.0;
};

inline Point uniform_in_disc(double radius, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(rng));
  const double theta = 2.0 * std::numbers::pi * unit(rng);
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace detail

// Builds the station/user topology. Users that end up disconnected are
// redrawn individually (links or position + fading) up to 100 attempts each.
inline ScenarioTopology build_scenario(int stations, int users,
                                       const ScenarioParams& params,
                                       Rng& rng) {
  if (stations < 1) throw ValidationError("station_count >= 1");
  if (users < 0) throw ValidationError("user_count >= 0");
  ScenarioTopology topo;
  topo.stations = stations;
  topo.users = users;
  topo.mode = params.mode;
  topo.area_radius_m = params.area_radius_m;
  topo.sinr_threshold_db = params.sinr_threshold_db;
  topo.miss_penalty_alpha = params.miss_penalty_alpha;
  topo.link.assign(static_cast<std::size_t>(stations) * users, 0);
  topo.serving.assign(users, -1);

  constexpr int kMaxAttempts = 100;

  if (params.mode == ScenarioMode::fixed_link) {
    std::bernoulli_distribution coin(0.5);
    for (int u = 0; u < users; ++u) {
      bool connected = false;
      for (int attempt = 0; attempt < kMaxAttempts && !connected; ++attempt) {
        for (int k = 0; k < stations; ++k) {
          const std::uint8_t bit = coin(rng) ? 1 : 0;
          topo.link[static_cast<std::size_t>(k) * users + u] = bit;
          connected = connected || bit != 0;
        }
      }
      if (!connected)
        throw ScenarioInfeasible("user " + std::to_string(u) +
                                 " has no connected station");
      std::vector<int> options;
      for (int k = 0; k < stations; ++k)
        if (topo.connected(k, u)) options.push_back(k);
      std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
      topo.serving[u] = options[pick(rng)];
    }
    return topo;
  }

  topo.sinr.assign(static_cast<std::size_t>(stations) * users, 0.0);
  std::vector<detail::Point> bs(stations);
  for (int k = 0; k < stations; ++k)
    bs[k] = detail::uniform_in_disc(params.area_radius_m, rng);

  std::exponential_distribution<double> fading(1.0);
  std::vector<double> rcv(stations);
  for (int u = 0; u < users; ++u) {
    bool connected = false;
    for (int attempt = 0; attempt < kMaxAttempts && !connected; ++attempt) {
      const detail::Point pos = detail::uniform_in_disc(params.area_radius_m, rng);
      for (int k = 0; k < stations; ++k) {
        const double dx = pos.x - bs[k].x;
        const double dy = pos.y - bs[k].y;
        const double d = std::max(std::sqrt(dx * dx + dy * dy),
                                  params.min_distance_m);
        rcv[k] = params.tx_power_w * fading(rng) *
                 std::pow(d, -params.path_loss_exponent);
      }
      double total = params.noise_w;
      for (int k = 0; k < stations; ++k) total += rcv[k];
      int best = -1;
      double best_sinr = 0.0;
      for (int k = 0; k < stations; ++k) {
        const double s = rcv[k] / (total - rcv[k]);
        topo.sinr[static_cast<std::size_t>(k) * users + u] = s;
        const bool up = 10.0 * std::log10(s) >= params.sinr_threshold_db;
        topo.link[static_cast<std::size_t>(k) * users + u] = up ? 1 : 0;
        if (up && (best < 0 || s > best_sinr)) {
          best = k;
          best_sinr = s;
        }
      }
      if (best >= 0) {
        topo.serving[u] = best;
        connected = true;
      }
    }
    if (!connected)
      throw ScenarioInfeasible("user " + std::to_string(u) +
                               " has no station above the SINR threshold");
  }
  return topo;
}

}  // namespace recache
