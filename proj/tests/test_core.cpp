#include <catch2/catch_amalgamated.hpp>

#include "recache/demand.hpp"
#include "recache/rng.hpp"
#include "recache/types.hpp"

using namespace recache;

namespace {

Ptm two_file_ptm() {
  // columns (0.7, 0.3) and (0.2, 0.8)
  return Ptm(2, {0.7, 0.3, 0.2, 0.8});
}

Ptm random_ptm(int files, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> entries(static_cast<std::size_t>(files) * files);
  for (int j = 0; j < files; ++j) {
    double sum = 0.0;
    for (int i = 0; i < files; ++i) {
      const double x = unit(rng) + 1e-3;
      entries[static_cast<std::size_t>(j) * files + i] = x;
      sum += x;
    }
    for (int i = 0; i < files; ++i)
      entries[static_cast<std::size_t>(j) * files + i] /= sum;
  }
  return Ptm(files, std::move(entries));
}

}  // namespace

TEST_CASE("catalog requires at least one file") {
  CHECK(Catalog(1).file_count == 1);
  CHECK_THROWS_AS(Catalog(0), ValidationError);
}

TEST_CASE("ptm validates column sums and entry range") {
  CHECK_NOTHROW(two_file_ptm());
  CHECK_THROWS_AS(Ptm(2, {0.7, 0.3, 0.2, 0.7}), ValidationError);
  CHECK_THROWS_AS(Ptm(2, {1.2, -0.2, 0.5, 0.5}), ValidationError);
  CHECK_THROWS_AS(Ptm(2, {0.5, 0.5, 1.0}), DimensionMismatch);
  const Ptm id = Ptm::identity(3);
  CHECK(id.at(0, 0) == 1.0);
  CHECK(id.at(1, 0) == 0.0);
  const Ptm uni = Ptm::uniform(4);
  CHECK(uni.at(3, 2) == 0.25);
}

TEST_CASE("constraint set validates budgets") {
  const ConstraintSet cs(4, 1, 2);
  CHECK(cs.cache_fraction() == 0.25);
  CHECK(cs.rec_fraction() == 0.5);
  CHECK_THROWS_AS(ConstraintSet(4, 5, 1), ValidationError);
  CHECK_THROWS_AS(ConstraintSet(4, 0, 1), ValidationError);
  CHECK_THROWS_AS(ConstraintSet(4, 1, 5), ValidationError);
}

TEST_CASE("strategy validation") {
  const ConstraintSet cs(3, 1, 2);
  Strategy s = make_integral_strategy(3, std::vector<int>{0},
                                      std::vector<int>{1, 2});
  CHECK(s.integral());
  CHECK_NOTHROW(validate_strategy(s, cs));
  s.cache[1] = 1.0;  // exceeds cache budget
  CHECK_THROWS_AS(validate_strategy(s, cs), ValidationError);
  Strategy frac;
  frac.cache = {0.5, 0.5, 0.0};
  frac.recommend = {1.0, 0.0, 0.0};
  CHECK_FALSE(frac.integral());
  CHECK_NOTHROW(validate_strategy(frac, cs));
}

TEST_CASE("generate_demands: degenerate column puts all mass on file 1") {
  // column j = e1: everyone recommended j requests file 0
  const Ptm p(3, {1, 0, 0, 1, 0, 0, 1, 0, 0});
  Strategy s = make_integral_strategy(3, std::vector<int>{}, std::vector<int>{1});
  Rng rng(7);
  const SlotDemand sd = generate_demands(p, s, 5, 0, rng);
  CHECK(sd.demand.counts == std::vector<std::uint64_t>{5, 0, 0});
  CHECK(sd.picks.size() == 5);
  for (const auto& [i, j] : sd.picks) {
    CHECK(i == 0);
    CHECK(j == 1);
  }
}

TEST_CASE("generate_demands: law of large numbers on a uniform column") {
  const int files = 4;
  const Ptm p = Ptm::uniform(files);
  Strategy s = make_integral_strategy(files, std::vector<int>{},
                                      std::vector<int>{2});
  Rng rng(11);
  const long n = 100000;
  const SlotDemand sd = generate_demands(p, s, n, 0, rng);
  std::uint64_t total = 0;
  for (int i = 0; i < files; ++i) {
    total += sd.demand.counts[i];
    CHECK(std::abs(static_cast<double>(sd.demand.counts[i]) / n - 0.25) < 0.01);
  }
  CHECK(total == static_cast<std::uint64_t>(n));
}

TEST_CASE("generate_demands: uniform pick mixes recommended columns") {
  // d1/N ~ 0.5*0.7 + 0.5*0.2 = 0.45
  const Ptm p = two_file_ptm();
  Strategy s = make_integral_strategy(2, std::vector<int>{},
                                      std::vector<int>{0, 1});
  Rng rng(13);
  const long n = 100000;
  const SlotDemand sd = generate_demands(p, s, n, 0, rng);
  CHECK(std::abs(static_cast<double>(sd.demand.counts[0]) / n - 0.45) < 0.01);
}

TEST_CASE("generate_demands rejects empty or fractional recommendations") {
  const Ptm p = two_file_ptm();
  Strategy zero = make_integral_strategy(2, std::vector<int>{},
                                         std::vector<int>{});
  Rng rng(1);
  CHECK_THROWS_AS(generate_demands(p, zero, 3, 0, rng), NoRecommendation);
  Strategy frac;
  frac.cache = {0.0, 0.0};
  frac.recommend = {0.5, 0.5};
  CHECK_THROWS_AS(generate_demands(p, frac, 3, 0, rng), ValidationError);
}

TEST_CASE("expected_hit basics") {
  const Ptm id = Ptm::identity(3);
  Strategy s = make_integral_strategy(3, std::vector<int>{0},
                                      std::vector<int>{0});
  CHECK(expected_hit(id, s) == 1.0);
  s.recommend = {0.0, 1.0, 0.0};
  CHECK(expected_hit(id, s) == 0.0);
  s.cache = {0.0, 0.0, 0.0};
  s.recommend = {1.0, 0.0, 0.0};
  CHECK(expected_hit(id, s) == 0.0);
}

TEST_CASE("expected_hit is bilinear in the cache vector") {
  Rng rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Ptm p = random_ptm(5, rng);
    Strategy s;
    s.cache.resize(5);
    s.recommend.resize(5);
    for (int i = 0; i < 5; ++i) {
      s.cache[i] = unit(rng);
      s.recommend[i] = unit(rng);
    }
    const double a = unit(rng);
    Strategy scaled = s;
    for (double& x : scaled.cache) x *= a;
    CHECK_THAT(expected_hit(p, scaled),
               Catch::Matchers::WithinAbs(a * expected_hit(p, s), 1e-12));
  }
}

TEST_CASE("update_demand_matrix counts attributed requests") {
  DemandMatrix dm(3, 5);
  SlotDemand sd;
  sd.demand.counts = {5, 0, 0};
  sd.demand.user_count = 5;
  for (int n = 0; n < 5; ++n) sd.picks.emplace_back(0, 1);
  const std::vector<double> v = {0.0, 1.0, 0.0};
  update_demand_matrix(dm, sd, v);
  CHECK(dm.at(0, 1) == 5);
  CHECK(dm.col_slots[1] == 1);
  CHECK(dm.col_slots[0] == 0);
  update_demand_matrix(dm, sd, v);
  CHECK(dm.at(0, 1) == 10);
  CHECK(dm.col_slots[1] == 2);
}

TEST_CASE("update_demand_matrix is order independent and additive") {
  const Ptm p = two_file_ptm();
  Strategy s = make_integral_strategy(2, std::vector<int>{},
                                      std::vector<int>{0, 1});
  Rng rng(31);
  SlotDemand sd = generate_demands(p, s, 50, 0, rng);

  DemandMatrix forward(2, 50);
  update_demand_matrix(forward, sd, s.recommend);

  SlotDemand reversed = sd;
  std::reverse(reversed.picks.begin(), reversed.picks.end());
  DemandMatrix backward(2, 50);
  update_demand_matrix(backward, reversed, s.recommend);
  CHECK(forward.alpha == backward.alpha);
  CHECK(forward.col_slots == backward.col_slots);
}

TEST_CASE("single-file recommendation ties column mass to N * col_slots") {
  const Ptm p = two_file_ptm();
  Rng rng(37);
  DemandMatrix dm(2, 10);
  for (long t = 0; t < 20; ++t) {
    const int j = static_cast<int>(t % 2);
    Strategy s = make_integral_strategy(2, std::vector<int>{},
                                        std::vector<int>{j});
    const SlotDemand sd = generate_demands(p, s, 10, t, rng);
    update_demand_matrix(dm, sd, s.recommend);
  }
  for (int j = 0; j < 2; ++j)
    CHECK(dm.column_mass(j) ==
          static_cast<std::uint64_t>(dm.user_count) * dm.col_slots[j]);
}
