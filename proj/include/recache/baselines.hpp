#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "recache/errors.hpp"

namespace recache {

enum class CacheReplacement { lru, lfu, lrfu };

enum class AccessResult { hit, miss };

// Classic replacement-policy cache over file ids. LRFU scores each resident
// file with CRF_f(t) = sum over past accesses of (1/2)^(decay * (t - t_a)),
// maintained incrementally; decay -> 0 recovers LFU, large decay recovers
// LRU. Recency ties are broken by a per-access sequence number because a
// slot can carry many accesses.
class CachePolicyState {
 public:
  CachePolicyState() = default;

  CachePolicyState(CacheReplacement policy, int capacity,
                   double lrfu_decay = 0.5)
      : policy_(policy), capacity_(capacity), decay_(lrfu_decay) {
    if (capacity < 1) throw ValidationError("cache capacity >= 1");
    if (lrfu_decay < 0.0) throw ValidationError("lrfu_decay >= 0");
  }

  AccessResult access(int file, long slot) {
    ++seq_;
    auto it = meta_.find(file);
    if (it != meta_.end()) {
      Meta& m = it->second;
      m.crf = decayed_crf(m, slot) + 1.0;
      m.last_slot = slot;
      m.last_seq = seq_;
      ++m.count;
      return AccessResult::hit;
    }
    if (static_cast<int>(meta_.size()) >= capacity_) evict(slot);
    Meta m;
    m.last_slot = slot;
    m.last_seq = seq_;
    m.count = 1;
    m.crf = 1.0;
    meta_.emplace(file, m);
    return AccessResult::miss;
  }

  bool resident(int file) const { return meta_.count(file) != 0; }

  int size() const { return static_cast<int>(meta_.size()); }
  int capacity() const { return capacity_; }
  CacheReplacement policy() const { return policy_; }

  std::vector<int> resident_files() const {
    std::vector<int> out;
    out.reserve(meta_.size());
    for (const auto& [file, meta] : meta_) out.push_back(file);
    return out;
  }

  // 0/1 cache vector over the catalog, e.g. for expected-hit accounting.
  std::vector<double> cache_indicator(int files) const {
    std::vector<double> u(files, 0.0);
    for (const auto& [file, meta] : meta_)
      if (file >= 0 && file < files) u[file] = 1.0;
    return u;
  }

 private:
  struct Meta {
    long last_slot = 0;
    std::uint64_t last_seq = 0;
    std::uint64_t count = 0;
    double crf = 0.0;  // value at last_slot
  };

  double decayed_crf(const Meta& m, long slot) const {
    return m.crf * std::exp2(-decay_ * static_cast<double>(slot - m.last_slot));
  }

  void evict(long slot) {
    int victim = -1;
    const Meta* vm = nullptr;
    for (const auto& [file, m] : meta_) {
      if (vm == nullptr || better_victim(m, *vm, file, victim, slot)) {
        victim = file;
        vm = &m;
      }
    }
    meta_.erase(victim);
  }

  bool better_victim(const Meta& a, const Meta& b, int file_a, int file_b,
                     long slot) const {
    switch (policy_) {
      case CacheReplacement::lru:
        if (a.last_seq != b.last_seq) return a.last_seq < b.last_seq;
        break;
      case CacheReplacement::lfu:
        if (a.count != b.count) return a.count < b.count;
        if (a.last_seq != b.last_seq) return a.last_seq < b.last_seq;
        break;
      case CacheReplacement::lrfu: {
        const double sa = decayed_crf(a, slot);
        const double sb = decayed_crf(b, slot);
        if (sa != sb) return sa < sb;
        if (a.last_seq != b.last_seq) return a.last_seq < b.last_seq;
        break;
      }
    }
    return file_a < file_b;
  }

  CacheReplacement policy_ = CacheReplacement::lru;
  int capacity_ = 1;
  double decay_ = 0.5;
  std::uint64_t seq_ = 0;
  std::unordered_map<int, Meta> meta_;
};

}  // namespace recache
