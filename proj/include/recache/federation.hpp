#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "recache/types.hpp"

namespace recache {

enum class WeightMode { static_lambda, time_decay };

// Convex fusion coefficients: row k holds the weights station k applies to
// the M stations' estimates. Every row sums to 1.
struct FusionWeights {
  int stations = 1;
  std::vector<double> lambda;  // row-major M x M

  std::span<const double> row(int k) const {
    return {lambda.data() + static_cast<std::size_t>(k) * stations,
            static_cast<std::size_t>(stations)};
  }
};

inline void validate_weights_row(std::span<const double> w) {
  double sum = 0.0;
  for (double x : w) {
    if (x < -1e-12 || x > 1.0 + 1e-12)
      throw InvalidWeight("fusion weights in [0,1]");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kStochasticTol)
    throw InvalidWeight("fusion weight row sums to 1 (got " +
                        std::to_string(sum) + ")");
}

// Entrywise convex combination of the stations' PTM estimates; convexity
// preserves column-stochasticity.
inline Ptm fuse(std::span<const Ptm> estimates, std::span<const double> weights) {
  if (estimates.empty()) throw DimensionMismatch("at least one estimate");
  if (estimates.size() != weights.size())
    throw DimensionMismatch("one weight per estimate");
  validate_weights_row(weights);
  const int files = estimates[0].files();
  for (const Ptm& p : estimates)
    if (p.files() != files)
      throw DimensionMismatch("all estimates must share F");
  std::vector<double> entries(static_cast<std::size_t>(files) * files, 0.0);
  for (std::size_t k = 0; k < estimates.size(); ++k) {
    const double w = weights[k];
    if (w == 0.0) continue;
    const auto data = estimates[k].data();
    for (std::size_t n = 0; n < entries.size(); ++n) entries[n] += w * data[n];
  }
  return Ptm(files, std::move(entries));
}

// Weight schedules from the regret analysis. time_decay gives every neighbor
// 1/((M-1) sqrt(T)) and the rest to the station itself, which for M = 2
// reduces to lambda = 1 - 1/sqrt(T). static broadcasts a fixed own-weight
// lambda and splits the remainder evenly across neighbors.
inline FusionWeights schedule_weights(int stations, long horizon,
                                      WeightMode mode,
                                      double own_lambda = 0.5) {
  if (stations < 1) throw ValidationError("station_count >= 1");
  if (horizon < 1) throw ValidationError("horizon >= 1");
  FusionWeights fw;
  fw.stations = stations;
  fw.lambda.assign(static_cast<std::size_t>(stations) * stations, 0.0);
  if (stations == 1) {
    fw.lambda[0] = 1.0;
    return fw;
  }
  double own = 0.0, neighbor = 0.0;
  if (mode == WeightMode::time_decay) {
    neighbor = 1.0 / ((stations - 1) * std::sqrt(static_cast<double>(horizon)));
    own = 1.0 - (stations - 1) * neighbor;
  } else {
    if (own_lambda < 0.0 || own_lambda > 1.0)
      throw InvalidWeight("static own-weight lambda in [0,1]");
    own = own_lambda;
    neighbor = (1.0 - own_lambda) / (stations - 1);
  }
  if (own < -1e-12)
    throw InvalidWeight("own weight < 0: horizon too small for station count");
  for (int k = 0; k < stations; ++k)
    for (int j = 0; j < stations; ++j)
      fw.lambda[static_cast<std::size_t>(k) * stations + j] =
          (j == k) ? own : neighbor;
  for (int k = 0; k < stations; ++k) validate_weights_row(fw.row(k));
  return fw;
}

}  // namespace recache
