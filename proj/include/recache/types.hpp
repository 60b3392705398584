#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "recache/errors.hpp"

namespace recache {

// Tolerance for simplex / budget checks.
inline constexpr double kStochasticTol = 1e-9;

struct Catalog {
  int file_count = 1;

  explicit Catalog(int files) : file_count(files) {
    if (files < 1) throw ValidationError("file_count >= 1");
  }
};

// Column-stochastic probability transition matrix: entry (i, j) is the
// probability that file i is requested given file j was recommended.
// Stored column-major so that sampling and column sums touch contiguous
// memory.
class Ptm {
 public:
  Ptm(int files, std::vector<double> column_major)
      : files_(files), col_(std::move(column_major)) {
    if (files_ < 1) throw ValidationError("file_count >= 1");
    if (col_.size() != static_cast<std::size_t>(files_) * files_)
      throw DimensionMismatch("ptm entries must be F x F");
    for (int j = 0; j < files_; ++j) {
      double sum = 0.0;
      for (int i = 0; i < files_; ++i) {
        const double p = col_[index(i, j)];
        if (p < -1e-12 || p > 1.0 + 1e-12)
          throw ValidationError("ptm entries in [0,1]");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kStochasticTol)
        throw ValidationError("ptm column sums to 1 (column " +
                              std::to_string(j) + " sums to " +
                              std::to_string(sum) + ")");
    }
  }

  static Ptm identity(int files) {
    std::vector<double> e(static_cast<std::size_t>(files) * files, 0.0);
    for (int j = 0; j < files; ++j) e[static_cast<std::size_t>(j) * files + j] = 1.0;
    return Ptm(files, std::move(e));
  }

  // Every entry 1/F; every recommendation looks the same.
  static Ptm uniform(int files) {
    std::vector<double> e(static_cast<std::size_t>(files) * files,
                          1.0 / files);
    return Ptm(files, std::move(e));
  }

  int files() const { return files_; }

  double at(int requested, int recommended) const {
    return col_[index(requested, recommended)];
  }

  std::span<const double> column(int j) const {
    return {col_.data() + static_cast<std::size_t>(j) * files_,
            static_cast<std::size_t>(files_)};
  }

  std::span<const double> data() const { return col_; }

  // w = P v (expected request profile under recommendation weights v).
  std::vector<double> apply(std::span<const double> v) const {
    if (v.size() != static_cast<std::size_t>(files_))
      throw DimensionMismatch("vector length must equal F");
    std::vector<double> w(files_, 0.0);
    for (int j = 0; j < files_; ++j) {
      const double vj = v[j];
      if (vj == 0.0) continue;
      const double* c = col_.data() + static_cast<std::size_t>(j) * files_;
      for (int i = 0; i < files_; ++i) w[i] += c[i] * vj;
    }
    return w;
  }

  // w = P^T u (per-recommendation expected hit mass for cache weights u).
  std::vector<double> apply_transposed(std::span<const double> u) const {
    if (u.size() != static_cast<std::size_t>(files_))
      throw DimensionMismatch("vector length must equal F");
    std::vector<double> w(files_, 0.0);
    for (int j = 0; j < files_; ++j) {
      const double* c = col_.data() + static_cast<std::size_t>(j) * files_;
      double dot = 0.0;
      for (int i = 0; i < files_; ++i) dot += c[i] * u[i];
      w[j] = dot;
    }
    return w;
  }

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * files_ + i;
  }

  int files_;
  std::vector<double> col_;
};

// Cache and recommendation budgets (c, r). Also houses the exploration
// probabilities p = c/F and q = r/F used by the i.i.d. phases.
struct ConstraintSet {
  int files = 1;
  int cache_budget = 1;
  int rec_budget = 1;

  ConstraintSet(int f, int c, int r)
      : files(f), cache_budget(c), rec_budget(r) {
    if (f < 1) throw ValidationError("file_count >= 1");
    if (c < 1) throw ValidationError("cache_budget >= 1");
    if (c > f) throw ValidationError("cache_budget <= F");
    if (r < 1) throw ValidationError("rec_budget >= 1");
    if (r > f) throw ValidationError("rec_budget <= F");
  }

  double cache_fraction() const { return static_cast<double>(cache_budget) / files; }
  double rec_fraction() const { return static_cast<double>(rec_budget) / files; }
};

inline bool is_integral_vector(std::span<const double> x) {
  for (double v : x)
    if (v != 0.0 && v != 1.0) return false;
  return true;
}

inline std::vector<int> support(std::span<const double> x) {
  std::vector<int> idx;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0.0) idx.push_back(static_cast<int>(i));
  return idx;
}

// A caching / recommendation pair (u, v) in [0,1]^F with sum(u) <= c,
// sum(v) <= r. Realized runs always use 0/1 vectors.
struct Strategy {
  std::vector<double> cache;      // u
  std::vector<double> recommend;  // v

  bool integral() const {
    return is_integral_vector(cache) && is_integral_vector(recommend);
  }

  double cache_mass() const {
    double s = 0.0;
    for (double v : cache) s += v;
    return s;
  }

  double rec_mass() const {
    double s = 0.0;
    for (double v : recommend) s += v;
    return s;
  }
};

inline void validate_strategy(const Strategy& s, const ConstraintSet& cs) {
  if (s.cache.size() != static_cast<std::size_t>(cs.files) ||
      s.recommend.size() != static_cast<std::size_t>(cs.files))
    throw DimensionMismatch("strategy vectors must have length F");
  for (double v : s.cache)
    if (v < 0.0 || v > 1.0) throw ValidationError("cache entries in [0,1]");
  for (double v : s.recommend)
    if (v < 0.0 || v > 1.0) throw ValidationError("recommend entries in [0,1]");
  if (s.cache_mass() > cs.cache_budget + kStochasticTol)
    throw ValidationError("sum(u) <= cache_budget");
  if (s.rec_mass() > cs.rec_budget + kStochasticTol)
    throw ValidationError("sum(v) <= rec_budget");
}

inline Strategy make_integral_strategy(int files, std::span<const int> cache_set,
                                       std::span<const int> rec_set) {
  Strategy s;
  s.cache.assign(files, 0.0);
  s.recommend.assign(files, 0.0);
  for (int i : cache_set) s.cache[i] = 1.0;
  for (int j : rec_set) s.recommend[j] = 1.0;
  return s;
}

}  // namespace recache
