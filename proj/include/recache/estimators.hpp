#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "recache/demand.hpp"
#include "recache/rng.hpp"
#include "recache/types.hpp"

namespace recache {

// Sample from Dirichlet(alphas) by normalizing independent Gamma(alpha, 1)
// draws. Every alpha must be strictly positive.
inline std::vector<double> dirichlet_draw(std::span<const double> alphas,
                                          Rng& rng) {
  if (alphas.empty()) throw InvalidAlpha("alphas must be non-empty");
  for (double a : alphas)
    if (!(a > 0.0)) throw InvalidAlpha("dirichlet parameters must be > 0");
  std::vector<double> x(alphas.size());
  double total = 0.0;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    std::gamma_distribution<double> gamma(alphas[k], 1.0);
    x[k] = gamma(rng);
    total += x[k];
  }
  if (total <= 0.0) {
    // All gamma draws underflowed (only reachable with tiny alphas).
    x.assign(alphas.size(), 1.0 / alphas.size());
    return x;
  }
  for (double& v : x) v /= total;
  return x;
}

// Frequency estimate of the PTM. Column j is the attributed demand counts
// renormalized to a distribution; columns with no observations fall back to
// uniform so the optimizer always sees a full column-stochastic matrix.
inline Ptm point_estimate(const DemandMatrix& dm) {
  const int files = dm.files;
  if (files == 0) throw ValidationError("demand matrix must be initialized");
  std::vector<double> entries(static_cast<std::size_t>(files) * files);
  for (int j = 0; j < files; ++j) {
    const std::uint64_t mass = dm.column_mass(j);
    double* out = entries.data() + static_cast<std::size_t>(j) * files;
    if (mass == 0) {
      for (int i = 0; i < files; ++i) out[i] = 1.0 / files;
    } else {
      for (int i = 0; i < files; ++i)
        out[i] = static_cast<double>(dm.at(i, j)) / static_cast<double>(mass);
    }
  }
  return Ptm(files, std::move(entries));
}

// Posterior sample of the PTM: column j ~ Dirichlet(alpha[.][j] + s) where
// s is the prior pseudocount. With s = 0, zero-count coordinates sit outside
// the Dirichlet support; the sample follows the limiting measure, which puts
// zero mass there (an all-zero column degenerates to a uniformly chosen
// vertex of the simplex).
inline Ptm bayes_sample(const DemandMatrix& dm, double prior_pseudocount,
                        Rng& rng) {
  const int files = dm.files;
  if (files == 0) throw ValidationError("demand matrix must be initialized");
  if (prior_pseudocount < 0.0)
    throw ValidationError("prior_pseudocount >= 0");
  std::vector<double> entries(static_cast<std::size_t>(files) * files, 0.0);
  std::vector<double> alphas;
  std::vector<int> live;
  for (int j = 0; j < files; ++j) {
    double* out = entries.data() + static_cast<std::size_t>(j) * files;
    alphas.clear();
    live.clear();
    for (int i = 0; i < files; ++i) {
      const double a = static_cast<double>(dm.at(i, j)) + prior_pseudocount;
      if (a > 0.0) {
        alphas.push_back(a);
        live.push_back(i);
      }
    }
    if (live.empty()) {
      std::uniform_int_distribution<int> vertex(0, files - 1);
      out[vertex(rng)] = 1.0;
      continue;
    }
    const std::vector<double> col = dirichlet_draw(alphas, rng);
    for (std::size_t n = 0; n < live.size(); ++n) out[live[n]] = col[n];
  }
  return Ptm(files, std::move(entries));
}

// Posterior-concentration statistic: sum_j 1 / (column mass + 1)^2.
inline double sigma_bar_sq(const DemandMatrix& dm) {
  double total = 0.0;
  for (int j = 0; j < dm.files; ++j) {
    const double denom = static_cast<double>(dm.column_mass(j)) + 1.0;
    total += 1.0 / (denom * denom);
  }
  return total;
}

enum class PointMode { explore_then_commit, genie_aided };

// Frequency estimator state. In explore_then_commit mode the estimate is
// frozen at the exploration horizon; in genie_aided mode every call reflects
// all demands observed so far.
class PointEstimator {
 public:
  PointEstimator(int files, long users, PointMode mode,
                 long exploration_horizon = 0)
      : dm_(files, users), mode_(mode), horizon_(exploration_horizon) {}

  void observe(const SlotDemand& sd, std::span<const double> v_active) {
    update_demand_matrix(dm_, sd, v_active);
  }

  bool exploring(long slot) const {
    return mode_ == PointMode::explore_then_commit && slot < horizon_;
  }

  Ptm estimate(long slot) {
    if (mode_ == PointMode::genie_aided) return point_estimate(dm_);
    if (slot < horizon_) return point_estimate(dm_);
    if (!frozen_) frozen_ = point_estimate(dm_);
    return *frozen_;
  }

  long horizon() const { return horizon_; }
  PointMode mode() const { return mode_; }
  const DemandMatrix& demands() const { return dm_; }

 private:
  DemandMatrix dm_;
  PointMode mode_;
  long horizon_;
  std::optional<Ptm> frozen_;
};

// Dirichlet posterior sampler state.
class BayesEstimator {
 public:
  BayesEstimator(int files, long users, double prior_pseudocount = 1.0)
      : dm_(files, users), prior_(prior_pseudocount) {
    if (prior_ < 0.0) throw ValidationError("prior_pseudocount >= 0");
  }

  void observe(const SlotDemand& sd, std::span<const double> v_active) {
    update_demand_matrix(dm_, sd, v_active);
  }

  Ptm sample(Rng& rng) const { return bayes_sample(dm_, prior_, rng); }

  double prior() const { return prior_; }
  const DemandMatrix& demands() const { return dm_; }

 private:
  DemandMatrix dm_;
  double prior_;
};

}  // namespace recache
