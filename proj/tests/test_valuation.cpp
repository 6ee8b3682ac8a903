#include "doctest.h"

#include <algorithm>
#include <random>
#include <vector>

#include "sigcomp/errors.hpp"
#include "sigcomp/valuation.hpp"

using namespace sigcomp;

namespace {

ValuationMatrix example_41() {
  return ValuationMatrix::from_rows({{1, 0, 1}, {1, 1, 0}, {0, 1, 1}});
}

ValuationMatrix random_matrix(int buyers, int goods, std::mt19937_64& rng) {
  std::vector<std::uint8_t> values(static_cast<std::size_t>(buyers) * goods);
  for (auto& v : values) v = rng() & 1;
  return ValuationMatrix(buyers, goods, std::move(values));
}

GoodMask mask_of(std::initializer_list<int> goods) {
  GoodMask m = 0;
  for (int g : goods) m |= GoodMask{1} << g;
  return m;
}

}  // namespace

TEST_CASE("valuation matrix validates its input") {
  CHECK_THROWS_AS(ValuationMatrix(0, 3, {}), InputError);
  CHECK_THROWS_AS(ValuationMatrix(1, 0, {}), InputError);
  CHECK_THROWS_AS(ValuationMatrix(1, 2, {0}), InputError);
  CHECK_THROWS_AS(ValuationMatrix(1, 2, {0, 2}), InputError);
  CHECK_THROWS_AS(ValuationMatrix::from_rows({{1, 0}, {1}}), InputError);
  CHECK_THROWS_AS(ValuationMatrix(65, 1, std::vector<std::uint8_t>(65, 0)), InputError);

  ValuationMatrix v = example_41();
  CHECK(v.num_buyers() == 3);
  CHECK(v.num_goods() == 3);
  CHECK(v.value(1, 1) == 1);
  CHECK(v.value(0, 1) == 0);
  CHECK(v.support(0) == mask_of({0, 2}));
  CHECK_THROWS_AS(v.value(3, 0), InputError);
  CHECK_THROWS_AS(v.value(0, 3), InputError);
}

TEST_CASE("block_value sums the buyer's entries over the block") {
  ValuationMatrix v = example_41();
  // Buyer 1 values both goods of the block {0,1}.
  CHECK(block_value(v, 1, mask_of({0, 1})) == 2);
  CHECK(block_value(v, 0, mask_of({0, 1})) == 1);
  CHECK(block_value(v, 2, 0) == 0);  // empty block
  CHECK_THROWS_AS(block_value(v, 0, GoodMask{1} << 5), InputError);
  CHECK_THROWS_AS(block_value(v, 7, mask_of({0})), InputError);

  // Independent oracle: direct per-entry summation.
  std::mt19937_64 rng(20107);
  for (int round = 0; round < 50; ++round) {
    ValuationMatrix m = random_matrix(4, 5, rng);
    GoodMask block = mask_of({0, 2, 4});
    int expected = m.value(0, 0) + m.value(0, 2) + m.value(0, 4);
    CHECK(block_value(m, 0, block) == expected);
  }
}

TEST_CASE("top_two reads the two highest block valuations") {
  ValuationMatrix v = example_41();
  TopTwo t = top_two(v, v.all_buyers(), mask_of({0, 1}));
  CHECK(t.highest == 2);
  CHECK(t.second == 1);
  REQUIRE(t.top_buyer.has_value());
  CHECK(*t.top_buyer == 1);

  SUBCASE("empty buyer set") {
    TopTwo empty = top_two(v, 0, mask_of({0, 1}));
    CHECK(empty.highest == 0);
    CHECK(empty.second == 0);
    CHECK_FALSE(empty.top_buyer.has_value());
  }

  SUBCASE("singleton buyer set has zero second max") {
    for (int b = 0; b < 3; ++b) {
      TopTwo single = top_two(v, BuyerMask{1} << b, v.all_goods());
      CHECK(single.highest == block_value(v, b, v.all_goods()));
      CHECK(single.second == 0);
      CHECK(*single.top_buyer == b);
    }
  }

  SUBCASE("ties pick the lowest-index maximizer and keep the tied value second") {
    ValuationMatrix tied = ValuationMatrix::from_rows({{1, 1}, {1, 1}, {0, 0}});
    TopTwo t2 = top_two(tied, tied.all_buyers(), tied.all_goods());
    CHECK(t2.highest == 2);
    CHECK(t2.second == 2);
    CHECK(*t2.top_buyer == 0);
  }
}

TEST_CASE("top_two agrees with a sort-based oracle on random inputs") {
  std::mt19937_64 rng(40502);
  for (int round = 0; round < 300; ++round) {
    ValuationMatrix m = random_matrix(5, 4, rng);
    BuyerMask buyers = rng() & m.all_buyers();
    GoodMask block = rng() & m.all_goods();
    TopTwo got = top_two(m, buyers, block);

    std::vector<std::pair<int, int>> ranked;  // (value, buyer)
    for (int b = 0; b < 5; ++b) {
      if (buyers & (BuyerMask{1} << b)) ranked.push_back({block_value(m, b, block), b});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    if (ranked.empty()) {
      CHECK(got.highest == 0);
      CHECK(got.second == 0);
      CHECK_FALSE(got.top_buyer.has_value());
    } else {
      CHECK(got.highest == ranked[0].first);
      CHECK(*got.top_buyer == ranked[0].second);
      CHECK(got.second == (ranked.size() > 1 ? ranked[1].first : 0));
    }
    CHECK(got.second <= got.highest);
    CHECK(got.highest <= std::popcount(block));
  }
}

TEST_CASE("demand profile counts goods by demand level") {
  DemandProfile ex = demand_profile(example_41());
  // Every column of the matrix sums to 2.
  CHECK(ex == DemandProfile{3, 3, 0});

  ValuationMatrix identity = ValuationMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(demand_profile(identity) == DemandProfile{3, 0, 3});

  ValuationMatrix zeros(2, 3, std::vector<std::uint8_t>(6, 0));
  CHECK(demand_profile(zeros) == DemandProfile{0, 0, 0});

  // Column-sum oracle on random matrices.
  std::mt19937_64 rng(77001);
  for (int round = 0; round < 100; ++round) {
    ValuationMatrix m = random_matrix(4, 6, rng);
    int p1 = 0, p2 = 0;
    for (int g = 0; g < 6; ++g) {
      int sum = 0;
      for (int b = 0; b < 4; ++b) sum += m.value(b, g);
      p1 += sum >= 1;
      p2 += sum >= 2;
    }
    DemandProfile dp = demand_profile(m);
    CHECK(dp.p1 == p1);
    CHECK(dp.p2 == p2);
    CHECK(dp.c1 == p1 - p2);
    CHECK(dp.p2 <= dp.p1);
    CHECK(dp.p1 <= 6);
  }
}
