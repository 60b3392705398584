#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "recache/rng.hpp"
#include "recache/types.hpp"

namespace recache {

// One slot's request tallies: counts[i] = number of users that requested
// file i. Always sums to user_count.
struct DemandVector {
  std::vector<std::uint64_t> counts;
  long slot = 0;
  long user_count = 0;
};

// Demands of one slot plus the per-user (requested, recommended) attribution
// pairs, so DemandMatrix updates are exact under multi-file recommendation.
struct SlotDemand {
  DemandVector demand;
  std::vector<std::pair<std::int32_t, std::int32_t>> picks;
};

// Sufficient statistic for both estimators: alpha[i][j] accumulates requests
// for i attributed to recommendation j; col_slots[j] counts the slots in
// which j was recommended.
struct DemandMatrix {
  int files = 0;
  long user_count = 0;
  std::vector<std::uint64_t> alpha;      // column-major F x F
  std::vector<std::uint64_t> col_slots;  // length F

  DemandMatrix() = default;

  DemandMatrix(int f, long users) : files(f), user_count(users) {
    if (f < 1) throw ValidationError("file_count >= 1");
    if (users < 0) throw ValidationError("user_count >= 0");
    alpha.assign(static_cast<std::size_t>(f) * f, 0);
    col_slots.assign(f, 0);
  }

  std::uint64_t at(int i, int j) const {
    return alpha[static_cast<std::size_t>(j) * files + i];
  }

  std::uint64_t& at(int i, int j) {
    return alpha[static_cast<std::size_t>(j) * files + i];
  }

  std::uint64_t column_mass(int j) const {
    const std::uint64_t* c = alpha.data() + static_cast<std::size_t>(j) * files;
    std::uint64_t m = 0;
    for (int i = 0; i < files; ++i) m += c[i];
    return m;
  }
};

// Each user picks one recommended file uniformly at random from the support
// of v, then requests a file drawn from that PTM column. Requires an
// integral recommendation vector with at least one recommended file.
inline SlotDemand generate_demands(const Ptm& ptm, const Strategy& strategy,
                                   long n_users, long slot, Rng& rng) {
  const int files = ptm.files();
  if (strategy.recommend.size() != static_cast<std::size_t>(files))
    throw DimensionMismatch("recommendation vector length must equal F");
  if (!is_integral_vector(strategy.recommend))
    throw ValidationError("recommendation vector must be integral");
  const std::vector<int> rec = support(strategy.recommend);
  if (rec.empty())
    throw NoRecommendation("at least one file must be recommended per slot");
  if (n_users < 0) throw ValidationError("user_count >= 0");

  SlotDemand out;
  out.demand.counts.assign(files, 0);
  out.demand.slot = slot;
  out.demand.user_count = n_users;
  out.picks.reserve(static_cast<std::size_t>(n_users));

  std::uniform_int_distribution<std::size_t> pick_rec(0, rec.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (long n = 0; n < n_users; ++n) {
    const int j = rec.size() == 1 ? rec[0] : rec[pick_rec(rng)];
    const auto col = ptm.column(j);
    const double x = unit(rng);
    double cum = 0.0;
    int i = files - 1;  // fall through to the last file on rounding slop
    for (int k = 0; k < files; ++k) {
      cum += col[k];
      if (x < cum) {
        i = k;
        break;
      }
    }
    ++out.demand.counts[i];
    out.picks.emplace_back(i, j);
  }
  return out;
}

// Average cache hit u^T P v.
inline double expected_hit(const Ptm& ptm, const Strategy& strategy) {
  const int files = ptm.files();
  if (strategy.cache.size() != static_cast<std::size_t>(files) ||
      strategy.recommend.size() != static_cast<std::size_t>(files))
    throw DimensionMismatch("strategy vectors must have length F");
  double total = 0.0;
  for (int j = 0; j < files; ++j) {
    const double vj = strategy.recommend[j];
    if (vj == 0.0) continue;
    const auto col = ptm.column(j);
    double dot = 0.0;
    for (int i = 0; i < files; ++i) dot += strategy.cache[i] * col[i];
    total += vj * dot;
  }
  return total;
}

// Accumulate one slot of attributed demands against the recommendation
// vector that was in force when the demands were generated.
inline void update_demand_matrix(DemandMatrix& dm, const SlotDemand& sd,
                                 std::span<const double> v_prev) {
  if (dm.files == 0) throw ValidationError("demand matrix must be initialized");
  if (v_prev.size() != static_cast<std::size_t>(dm.files))
    throw DimensionMismatch("recommendation vector length must equal F");
  if (!is_integral_vector(v_prev))
    throw ValidationError("recommendation vector must be integral");
  for (const auto& [i, j] : sd.picks) ++dm.at(i, j);
  for (int j = 0; j < dm.files; ++j)
    if (v_prev[j] == 1.0) ++dm.col_slots[j];
}

}  // namespace recache
