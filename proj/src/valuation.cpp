#include "sigcomp/valuation.hpp"

#include <bit>
#include <string>

namespace sigcomp {

ValuationMatrix::ValuationMatrix(int num_buyers, int num_goods,
                                 std::vector<std::uint8_t> values)
    : num_buyers_(num_buyers), num_goods_(num_goods), values_(std::move(values)) {
  if (num_buyers_ < 1 || num_goods_ < 1) {
    throw InputError("valuation matrix needs at least one buyer and one good");
  }
  if (num_buyers_ > kMaxBuyers || num_goods_ > kMaxGoods) {
    throw InputError("valuation matrix supports at most 64 buyers and 64 goods");
  }
  if (values_.size() != static_cast<std::size_t>(num_buyers_) * num_goods_) {
    throw InputError("valuation matrix has " + std::to_string(values_.size()) +
                     " entries, expected " + std::to_string(num_buyers_ * num_goods_));
  }
  support_.resize(num_buyers_);
  for (int b = 0; b < num_buyers_; ++b) {
    GoodMask row = 0;
    for (int g = 0; g < num_goods_; ++g) {
      std::uint8_t entry = values_[static_cast<std::size_t>(b) * num_goods_ + g];
      if (entry > 1) {
        throw InputError("non-binary valuation at buyer " + std::to_string(b) +
                         ", good " + std::to_string(g));
      }
      if (entry) row |= GoodMask{1} << g;
    }
    support_[b] = row;
  }
}

ValuationMatrix ValuationMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) throw InputError("valuation matrix needs at least one buyer");
  std::size_t goods = rows.front().size();
  std::vector<std::uint8_t> values;
  values.reserve(rows.size() * goods);
  for (const auto& row : rows) {
    if (row.size() != goods) throw InputError("ragged valuation matrix rows");
    for (int entry : row) {
      if (entry != 0 && entry != 1) throw InputError("non-binary valuation entry");
      values.push_back(static_cast<std::uint8_t>(entry));
    }
  }
  return ValuationMatrix(static_cast<int>(rows.size()), static_cast<int>(goods),
                         std::move(values));
}

void ValuationMatrix::check_buyer(int buyer) const {
  if (buyer < 0 || buyer >= num_buyers_) {
    throw InputError("buyer index " + std::to_string(buyer) + " out of range");
  }
}

void ValuationMatrix::check_good(int good) const {
  if (good < 0 || good >= num_goods_) {
    throw InputError("good index " + std::to_string(good) + " out of range");
  }
}

void ValuationMatrix::check_good_mask(GoodMask block) const {
  if (block & ~all_goods()) throw InputError("good set contains out-of-range indices");
}

void ValuationMatrix::check_buyer_mask(BuyerMask buyers) const {
  if (buyers & ~all_buyers()) throw InputError("buyer set contains out-of-range indices");
}

int block_value(const ValuationMatrix& v, int buyer, GoodMask block) {
  v.check_good_mask(block);
  return std::popcount(v.support(buyer) & block);
}

TopTwo top_two(const ValuationMatrix& v, BuyerMask buyers, GoodMask block) {
  v.check_buyer_mask(buyers);
  v.check_good_mask(block);
  TopTwo result;
  for (BuyerMask rest = buyers; rest != 0; rest &= rest - 1) {
    int b = std::countr_zero(rest);
    int value = std::popcount(v.support(b) & block);
    if (!result.top_buyer || value > result.highest) {
      if (result.top_buyer) result.second = std::max(result.second, result.highest);
      result.highest = value;
      result.top_buyer = b;
    } else if (value > result.second) {
      result.second = value;
    }
  }
  return result;
}

DemandProfile demand_profile(const ValuationMatrix& v) {
  DemandProfile dp;
  for (int g = 0; g < v.num_goods(); ++g) {
    int demand = 0;
    for (int b = 0; b < v.num_buyers(); ++b) demand += v.value(b, g);
    if (demand >= 1) ++dp.p1;
    if (demand >= 2) ++dp.p2;
  }
  dp.c1 = dp.p1 - dp.p2;
  return dp;
}

}  // namespace sigcomp
