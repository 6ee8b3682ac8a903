#include "sigcomp/game.hpp"

#include <string>

#include "sigcomp/errors.hpp"

namespace sigcomp {

std::string SellerProfile::to_string() const {
  std::string out;
  for (std::size_t s = 0; s < partitions.size(); ++s) {
    if (s > 0) out += ';';
    out += partitions[s].to_string();
  }
  return out;
}

SellerProfile SellerProfile::parse(std::string_view text, int num_goods) {
  SellerProfile profile;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = text.find(';', pos);
    std::string_view part =
        text.substr(pos, next == std::string_view::npos ? next : next - pos);
    profile.partitions.push_back(Partition::parse(part, num_goods));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return profile;
}

std::string BuyerAssignment::to_string() const {
  std::string out;
  for (std::size_t b = 0; b < choice.size(); ++b) {
    if (b > 0) out += ',';
    out += std::to_string(choice[b]);
  }
  return out;
}

BuyerMask buyers_at(const BuyerAssignment& assignment, int seller) {
  BuyerMask mask = 0;
  for (int b = 0; b < assignment.num_buyers(); ++b) {
    if (assignment.choice[b] == seller) mask |= BuyerMask{1} << b;
  }
  return mask;
}

BuyerMask co_bidders(const BuyerAssignment& assignment, int buyer) {
  return buyers_at(assignment, assignment.seller_of(buyer));
}

void check_consistent(const ValuationMatrix& v, const SellerProfile& profile,
                      const BuyerAssignment& assignment) {
  if (profile.partitions.empty()) throw InputError("seller profile is empty");
  for (const Partition& p : profile.partitions) {
    if (p.num_goods() != v.num_goods()) {
      throw InputError("partition covers " + std::to_string(p.num_goods()) +
                       " goods, instance has " + std::to_string(v.num_goods()));
    }
  }
  if (assignment.num_buyers() != v.num_buyers()) {
    throw InputError("assignment covers " + std::to_string(assignment.num_buyers()) +
                     " buyers, instance has " + std::to_string(v.num_buyers()));
  }
  for (int b = 0; b < assignment.num_buyers(); ++b) {
    if (assignment.choice[b] >= profile.partitions.size()) {
      throw InputError("buyer " + std::to_string(b) + " assigned to seller " +
                       std::to_string(assignment.choice[b]) + ", only " +
                       std::to_string(profile.num_sellers()) + " sellers");
    }
  }
}

Rational buyer_utility(const ValuationMatrix& v, const SellerProfile& profile,
                       const BuyerAssignment& assignment, int buyer) {
  check_consistent(v, profile, assignment);
  v.check_buyer(buyer);
  const int seller = assignment.seller_of(buyer);
  const BuyerMask rivals = co_bidders(assignment, buyer);  // includes `buyer`
  std::int64_t numerator = 0;
  for (GoodMask block : profile.partitions[seller].blocks()) {
    int own = block_value(v, buyer, block);
    int price = top_two(v, rivals, block).second;
    if (own > price) numerator += own - price;
  }
  return Rational(numerator, v.num_goods());
}

Rational seller_utility(const ValuationMatrix& v, const SellerProfile& profile,
                        const BuyerAssignment& assignment, int seller) {
  check_consistent(v, profile, assignment);
  if (seller < 0 || seller >= profile.num_sellers()) {
    throw InputError("seller index " + std::to_string(seller) + " out of range");
  }
  const BuyerMask bidders = buyers_at(assignment, seller);
  std::int64_t numerator = 0;
  for (GoodMask block : profile.partitions[seller].blocks()) {
    numerator += top_two(v, bidders, block).second;
  }
  return Rational(numerator, v.num_goods());
}

Rational social_welfare(const ValuationMatrix& v, const SellerProfile& profile,
                        const BuyerAssignment& assignment) {
  check_consistent(v, profile, assignment);
  std::int64_t numerator = 0;
  for (int s = 0; s < profile.num_sellers(); ++s) {
    const BuyerMask bidders = buyers_at(assignment, s);
    for (GoodMask block : profile.partitions[s].blocks()) {
      numerator += top_two(v, bidders, block).highest;
    }
  }
  return Rational(numerator, static_cast<std::int64_t>(profile.num_sellers()) * v.num_goods());
}

}  // namespace sigcomp
