#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sigcomp/partition.hpp"
#include "sigcomp/rational.hpp"
#include "sigcomp/valuation.hpp"

namespace sigcomp {

// One pure strategy tuple for the sellers.
struct SellerProfile {
  std::vector<Partition> partitions;

  int num_sellers() const { return static_cast<int>(partitions.size()); }

  // Partition text forms joined by ';', e.g. "0,1|2;0|1|2".
  std::string to_string() const;
  static SellerProfile parse(std::string_view text, int num_goods);

  auto operator<=>(const SellerProfile&) const = default;
};

// Which seller each buyer visits, for one fixed seller profile.
struct BuyerAssignment {
  std::vector<std::uint8_t> choice;

  int num_buyers() const { return static_cast<int>(choice.size()); }
  int seller_of(int buyer) const { return choice[buyer]; }

  std::string to_string() const;  // comma-joined seller indices

  auto operator<=>(const BuyerAssignment&) const = default;
};

// The buyers' full strategy f: one assignment per seller profile in some
// declared universe (for SPE certificates: the on-path profile plus every
// unilateral seller deviation).
struct ContingentBuyerStrategy {
  std::map<SellerProfile, BuyerAssignment> table;
};

// Buyers at seller s / buyers co-bidding with `buyer` (including itself).
BuyerMask buyers_at(const BuyerAssignment& assignment, int seller);
BuyerMask co_bidders(const BuyerAssignment& assignment, int buyer);

// Expected buyer surplus: (1/G) * sum over the chosen seller's blocks of
// max{v_b(block) - second-highest co-bidder valuation, 0}.
Rational buyer_utility(const ValuationMatrix& v, const SellerProfile& profile,
                       const BuyerAssignment& assignment, int buyer);

// Expected second-price revenue: (1/G) * sum over the seller's blocks of the
// second-highest valuation among its bidders (0 with fewer than 2 bidders).
Rational seller_utility(const ValuationMatrix& v, const SellerProfile& profile,
                        const BuyerAssignment& assignment, int seller);

// Probability that a random good is allocated to a buyer who values it,
// averaged over sellers: (1/(S*G)) * sum of per-block top valuations.
Rational social_welfare(const ValuationMatrix& v, const SellerProfile& profile,
                        const BuyerAssignment& assignment);

// Shared validation: matching good counts, seller counts, buyer counts.
void check_consistent(const ValuationMatrix& v, const SellerProfile& profile,
                      const BuyerAssignment& assignment);

}  // namespace sigcomp
