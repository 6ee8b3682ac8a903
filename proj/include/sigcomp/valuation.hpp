#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sigcomp/errors.hpp"

namespace sigcomp {

// Subsets of goods and buyers are bitmasks; bit i stands for index i.
// This caps instances at 64 buyers / 64 goods, far beyond anything the
// exhaustive searches can chew through anyway.
using GoodMask = std::uint64_t;
using BuyerMask = std::uint64_t;

inline constexpr int kMaxBuyers = 64;
inline constexpr int kMaxGoods = 64;

inline GoodMask full_mask(int count) {
  return count >= 64 ? ~GoodMask{0} : (GoodMask{1} << count) - 1;
}

// The B x G binary matrix v_b^g: the whole game instance apart from the
// number of sellers. Rows are buyers, columns are good variants.
class ValuationMatrix {
 public:
  // `values` is row-major, entries must be 0 or 1.
  ValuationMatrix(int num_buyers, int num_goods, std::vector<std::uint8_t> values);

  static ValuationMatrix from_rows(const std::vector<std::vector<int>>& rows);

  int num_buyers() const { return num_buyers_; }
  int num_goods() const { return num_goods_; }

  int value(int buyer, int good) const {
    check_buyer(buyer);
    check_good(good);
    return values_[static_cast<std::size_t>(buyer) * num_goods_ + good];
  }

  // Row `buyer` as a bitmask over goods.
  GoodMask support(int buyer) const {
    check_buyer(buyer);
    return support_[buyer];
  }

  GoodMask all_goods() const { return full_mask(num_goods_); }
  BuyerMask all_buyers() const { return full_mask(num_buyers_); }

  bool operator==(const ValuationMatrix&) const = default;

  void check_buyer(int buyer) const;
  void check_good(int good) const;
  void check_good_mask(GoodMask block) const;
  void check_buyer_mask(BuyerMask buyers) const;

 private:
  int num_buyers_;
  int num_goods_;
  std::vector<std::uint8_t> values_;
  std::vector<GoodMask> support_;
};

// v_b(block): how many goods in `block` the buyer values at 1.
int block_value(const ValuationMatrix& v, int buyer, GoodMask block);

// Highest and second-highest block valuations over a buyer set, plus the
// lowest-index maximizer. The second max is taken after removing that one
// maximizer; it is 0 when fewer than two buyers are present.
struct TopTwo {
  int highest = 0;
  int second = 0;
  std::optional<int> top_buyer;
};

TopTwo top_two(const ValuationMatrix& v, BuyerMask buyers, GoodMask block);

// p1 = goods demanded by at least one buyer, p2 = by at least two,
// c1 = p1 - p2 (unit-demand goods).
struct DemandProfile {
  int p1 = 0;
  int p2 = 0;
  int c1 = 0;

  bool operator==(const DemandProfile&) const = default;
};

DemandProfile demand_profile(const ValuationMatrix& v);

}  // namespace sigcomp
