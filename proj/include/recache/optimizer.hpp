#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "recache/demand.hpp"
#include "recache/rng.hpp"
#include "recache/types.hpp"

namespace recache {

// The bilinear program max u^T P v over the budgeted box is hard in general;
// each half-step is a fractional knapsack with an integral top-k optimum, so
// alternating best responses from random restarts is the production path and
// exhaustive enumeration the correctness oracle.
struct OptimizerConfig {
  int restarts = 8;
  int max_alternations = 100;
  enum class TieBreak { lowest_index };
  TieBreak tie_break = TieBreak::lowest_index;
};

namespace detail {

// 0/1 vector selecting the `budget` largest strictly-positive entries of w,
// ties broken by lowest index. Exact maximizer of x^T w over
// {x in [0,1]^F : sum(x) <= budget}.
inline std::vector<double> select_top(std::span<const double> w, int budget) {
  const int n = static_cast<int>(w.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (w[a] != w[b]) return w[a] > w[b];
    return a < b;
  });
  std::vector<double> x(n, 0.0);
  int taken = 0;
  for (int idx : order) {
    if (taken >= budget || w[idx] <= 0.0) break;
    x[idx] = 1.0;
    ++taken;
  }
  return x;
}

// Lexicographic comparison of (cache support, rec support) pairs, used for
// deterministic tie-breaking when values coincide.
inline bool support_pair_less(const Strategy& a, const Strategy& b) {
  const auto ua = support(a.cache), ub = support(b.cache);
  if (ua != ub)
    return std::lexicographical_compare(ua.begin(), ua.end(), ub.begin(),
                                        ub.end());
  const auto va = support(a.recommend), vb = support(b.recommend);
  return std::lexicographical_compare(va.begin(), va.end(), vb.begin(),
                                      vb.end());
}

inline std::vector<double> random_subset_indicator(int n, int k, Rng& rng) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  std::vector<double> x(n, 0.0);
  for (int i = 0; i < k; ++i) x[idx[i]] = 1.0;
  return x;
}

inline double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// Enumerate all index subsets of {0..n-1} with size <= max_size, in
// (size, lexicographic) order.
template <typename Fn>
void for_each_subset(int n, int max_size, Fn&& fn) {
  std::vector<int> pick;
  fn(std::span<const int>(pick));
  for (int size = 1; size <= max_size; ++size) {
    pick.assign(size, 0);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      fn(std::span<const int>(pick));
      int i = size - 1;
      while (i >= 0 && pick[i] == n - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int k = i + 1; k < size; ++k) pick[k] = pick[k - 1] + 1;
    }
  }
}

}  // namespace detail

// u-step of the alternating scheme: best cache vector against a fixed
// recommendation vector.
inline std::vector<double> best_response_cache(const Ptm& ptm,
                                               std::span<const double> v,
                                               int cache_budget) {
  return detail::select_top(ptm.apply(v), cache_budget);
}

// v-step: best recommendation vector against a fixed cache vector.
inline std::vector<double> best_response_recommend(const Ptm& ptm,
                                                   std::span<const double> u,
                                                   int rec_budget) {
  return detail::select_top(ptm.apply_transposed(u), rec_budget);
}

struct SolveResult {
  Strategy strategy;
  double value = 0.0;
};

// Alternating best responses with restarts. Restart 0 starts from the
// greedy recommendation (columns ranked by their top-c mass); the rest start
// from random cache or recommendation subsets in alternation, which reaches
// basins a one-sided start misses. The value sequence within a restart is
// non-decreasing and stops on the first non-improving sweep; restarts are
// merged by max value, ties by lexicographically smallest support pair.
inline SolveResult solve(const Ptm& ptm, const ConstraintSet& cs,
                         const OptimizerConfig& cfg, Rng& rng) {
  if (ptm.files() != cs.files)
    throw DimensionMismatch("ptm and constraints disagree on F");
  if (cfg.restarts < 1) throw ValidationError("restarts >= 1");
  const int files = cs.files;

  SolveResult best;
  best.strategy.cache.assign(files, 0.0);
  best.strategy.recommend.assign(files, 0.0);
  best.value = 0.0;
  bool have = false;

  auto greedy_recommend = [&]() {
    std::vector<double> score(files, 0.0);
    std::vector<double> col(files);
    for (int j = 0; j < files; ++j) {
      const auto c = ptm.column(j);
      col.assign(c.begin(), c.end());
      std::nth_element(col.begin(), col.begin() + (cs.cache_budget - 1),
                       col.end(), std::greater<>());
      double sum = 0.0;
      for (int i = 0; i < cs.cache_budget; ++i) sum += col[i];
      score[j] = sum;
    }
    return detail::select_top(score, cs.rec_budget);
  };

  // One improvement pass: alternating sweeps until they stall, then a scan
  // for a single recommended-column swap (w updated incrementally, O(F) per
  // candidate) that re-opens ascent. Strict improvement bounds the step
  // count.
  auto ascend = [&](Strategy s) {
    s.cache = best_response_cache(ptm, s.recommend, cs.cache_budget);
    double value = expected_hit(ptm, s);
    for (int step = 0; step < cfg.max_alternations; ++step) {
      Strategy next;
      next.recommend = best_response_recommend(ptm, s.cache, cs.rec_budget);
      next.cache = best_response_cache(ptm, next.recommend, cs.cache_budget);
      const double next_value = expected_hit(ptm, next);
      if (next_value > value + 1e-12) {
        s = std::move(next);
        value = next_value;
        continue;
      }
      bool swapped = false;
      const std::vector<double> w = ptm.apply(s.recommend);
      std::vector<double> trial(files);
      for (int out = 0; out < files && !swapped; ++out) {
        if (s.recommend[out] != 1.0) continue;
        const auto col_out = ptm.column(out);
        for (int in = 0; in < files && !swapped; ++in) {
          if (s.recommend[in] == 1.0) continue;
          const auto col_in = ptm.column(in);
          for (int i = 0; i < files; ++i)
            trial[i] = w[i] - col_out[i] + col_in[i];
          const std::vector<double> u =
              detail::select_top(trial, cs.cache_budget);
          double trial_value = 0.0;
          for (int i = 0; i < files; ++i) trial_value += u[i] * trial[i];
          if (trial_value > value + 1e-12) {
            s.recommend[out] = 0.0;
            s.recommend[in] = 1.0;
            s.cache = u;
            value = trial_value;
            swapped = true;
          }
        }
      }
      if (!swapped) break;
    }
    value = expected_hit(ptm, s);
    return std::make_pair(std::move(s), value);
  };

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    Strategy init;
    if (restart == 0) {
      init.recommend = greedy_recommend();
    } else if (restart % 2 == 1) {
      init.cache = detail::random_subset_indicator(files, cs.cache_budget, rng);
      init.recommend = best_response_recommend(ptm, init.cache, cs.rec_budget);
    } else {
      init.recommend = detail::random_subset_indicator(files, cs.rec_budget, rng);
    }
    auto [s, value] = ascend(std::move(init));
    if (!have || value > best.value + 1e-12 ||
        (std::abs(value - best.value) <= 1e-12 &&
         detail::support_pair_less(s, best.strategy))) {
      best.strategy = std::move(s);
      best.value = value;
      have = true;
    }
  }
  return best;
}

// Global maximum over all integral feasible strategies, by enumeration of
// every support pair of size <= c and <= r. Test oracle; guarded so callers
// cannot accidentally request an astronomically large enumeration.
inline SolveResult exhaustive_solve(const Ptm& ptm, const ConstraintSet& cs) {
  if (ptm.files() != cs.files)
    throw DimensionMismatch("ptm and constraints disagree on F");
  const int files = cs.files;
  const double combos = detail::choose(files, cs.cache_budget) *
                        detail::choose(files, cs.rec_budget);
  if (combos > 1e6)
    throw TooLarge("C(F,c) * C(F,r) exceeds 1e6");

  SolveResult best;
  best.strategy.cache.assign(files, 0.0);
  best.strategy.recommend.assign(files, 0.0);
  best.value = 0.0;

  detail::for_each_subset(files, cs.rec_budget, [&](std::span<const int> vset) {
    std::vector<double> v(files, 0.0);
    for (int j : vset) v[j] = 1.0;
    const std::vector<double> w = ptm.apply(v);
    detail::for_each_subset(files, cs.cache_budget,
                            [&](std::span<const int> uset) {
      double value = 0.0;
      for (int i : uset) value += w[i];
      if (value > best.value) {
        best.strategy = make_integral_strategy(files, uset, vset);
        best.value = value;
      } else if (value == best.value) {
        Strategy cand = make_integral_strategy(files, uset, vset);
        if (detail::support_pair_less(cand, best.strategy))
          best.strategy = std::move(cand);
      }
    });
  });
  best.value = expected_hit(ptm, best.strategy);
  return best;
}

}  // namespace recache
