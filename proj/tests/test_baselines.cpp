#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "recache/baselines.hpp"
#include "recache/rng.hpp"

using namespace recache;

TEST_CASE("lru hand simulation: 1,2,1,3 with capacity 2") {
  CachePolicyState lru(CacheReplacement::lru, 2);
  CHECK(lru.access(1, 0) == AccessResult::miss);
  CHECK(lru.access(2, 1) == AccessResult::miss);
  CHECK(lru.access(1, 2) == AccessResult::hit);
  CHECK(lru.access(3, 3) == AccessResult::miss);  // evicts 2
  auto files = lru.resident_files();
  std::sort(files.begin(), files.end());
  CHECK(files == std::vector<int>{1, 3});
}

TEST_CASE("single-slot cache: repeats are hits for every policy") {
  for (CacheReplacement policy : {CacheReplacement::lru, CacheReplacement::lfu,
                                  CacheReplacement::lrfu}) {
    CachePolicyState cache(policy, 1);
    CHECK(cache.access(7, 0) == AccessResult::miss);
    for (long t = 1; t < 10; ++t) CHECK(cache.access(7, t) == AccessResult::hit);
  }
}

TEST_CASE("lfu hand simulation: frequency wins over recency") {
  CachePolicyState lfu(CacheReplacement::lfu, 2);
  CHECK(lfu.access(1, 0) == AccessResult::miss);
  CHECK(lfu.access(1, 1) == AccessResult::hit);
  CHECK(lfu.access(1, 2) == AccessResult::hit);
  CHECK(lfu.access(2, 3) == AccessResult::miss);
  CHECK(lfu.access(3, 4) == AccessResult::miss);  // evicts 2 (count 1 < 3)
  auto files = lfu.resident_files();
  std::sort(files.begin(), files.end());
  CHECK(files == std::vector<int>{1, 3});
}

TEST_CASE("capacity is never exceeded") {
  Rng rng(5);
  std::uniform_int_distribution<int> file(0, 19);
  for (CacheReplacement policy : {CacheReplacement::lru, CacheReplacement::lfu,
                                  CacheReplacement::lrfu}) {
    CachePolicyState cache(policy, 4);
    for (long t = 0; t < 500; ++t) {
      cache.access(file(rng), t);
      CHECK(cache.size() <= 4);
    }
  }
}

TEST_CASE("a file accessed twice in a row hits the second time") {
  Rng rng(6);
  std::uniform_int_distribution<int> file(0, 9);
  for (CacheReplacement policy : {CacheReplacement::lru, CacheReplacement::lfu,
                                  CacheReplacement::lrfu}) {
    CachePolicyState cache(policy, 3);
    for (long t = 0; t < 300; ++t) {
      const int f = file(rng);
      cache.access(f, 2 * t);
      CHECK(cache.access(f, 2 * t + 1) == AccessResult::hit);
    }
  }
}

TEST_CASE("lrfu interpolates between lfu and lru") {
  // One access per slot so recency ordering is unambiguous.
  Rng rng(7);
  std::uniform_int_distribution<int> file(0, 19);
  std::vector<int> trace(1000);
  for (int& f : trace) f = file(rng);

  CachePolicyState as_lfu(CacheReplacement::lrfu, 5, 0.0);
  CachePolicyState lfu(CacheReplacement::lfu, 5);
  CachePolicyState as_lru(CacheReplacement::lrfu, 5, 64.0);
  CachePolicyState lru(CacheReplacement::lru, 5);
  for (long t = 0; t < static_cast<long>(trace.size()); ++t) {
    CHECK((as_lfu.access(trace[t], t) == AccessResult::hit) ==
          (lfu.access(trace[t], t) == AccessResult::hit));
    auto a = as_lfu.resident_files();
    auto b = lfu.resident_files();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);

    CHECK((as_lru.access(trace[t], t) == AccessResult::hit) ==
          (lru.access(trace[t], t) == AccessResult::hit));
    auto c = as_lru.resident_files();
    auto d = lru.resident_files();
    std::sort(c.begin(), c.end());
    std::sort(d.begin(), d.end());
    CHECK(c == d);
  }
}

TEST_CASE("cache indicator marks exactly the resident set") {
  CachePolicyState cache(CacheReplacement::lru, 2);
  cache.access(0, 0);
  cache.access(3, 1);
  const auto u = cache.cache_indicator(5);
  CHECK(u == std::vector<double>{1.0, 0.0, 0.0, 1.0, 0.0});
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(CachePolicyState(CacheReplacement::lru, 0), ValidationError);
  CHECK_THROWS_AS(CachePolicyState(CacheReplacement::lrfu, 2, -1.0),
                  ValidationError);
}
