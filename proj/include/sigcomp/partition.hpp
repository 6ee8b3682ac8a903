#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sigcomp/valuation.hpp"

namespace sigcomp {

// One seller's signalling scheme: a partition of the good set, stored as a
// restricted growth sequence. rgs[g] is the block index of good g, blocks
// are numbered by first appearance, so equal partitions have identical
// encodings and comparison is plain lexicographic order. The block list
// ("blocks sorted by minimum element, elements sorted inside") falls out of
// the encoding for free.
class Partition {
 public:
  static constexpr int kMaxGoods = 16;

  // Zero-good placeholder; every named constructor below yields a real
  // partition with num_goods >= 1.
  Partition() = default;

  static Partition trivial(int num_goods);  // single block {0..G-1}
  static Partition finest(int num_goods);   // all singletons

  static Partition from_rgs(std::span<const std::uint8_t> rgs);
  static Partition from_blocks(int num_goods, const std::vector<std::vector<int>>& blocks);

  // Text form "0,1|2": sorted indices comma-joined inside blocks, blocks
  // joined by '|'. Used verbatim in certificates and reports.
  static Partition parse(std::string_view text, int num_goods);
  std::string to_string() const;

  int num_goods() const { return num_goods_; }
  int num_blocks() const { return num_blocks_; }
  int block_index(int good) const { return rgs_[good]; }

  struct BlockMasks {
    std::array<GoodMask, kMaxGoods> mask{};
    int count = 0;
    const GoodMask* begin() const { return mask.data(); }
    const GoodMask* end() const { return mask.data() + count; }
  };
  BlockMasks blocks() const;

  auto operator<=>(const Partition&) const = default;
  bool operator==(const Partition&) const = default;

 private:
  // num_blocks_ is derived from rgs_, so keeping it last leaves the
  // defaulted comparison equal to (num_goods, rgs) lexicographic order.
  std::uint8_t num_goods_ = 0;
  std::array<std::uint8_t, kMaxGoods> rgs_{};
  std::uint8_t num_blocks_ = 0;

  friend class PartitionEnumerator;
};

// Bell numbers up to Bell(16); used for search budget checks.
std::uint64_t bell_number(int n);

struct EnumerationLimits {
  // Bell(12) is about 4.2M; anything past that is an explicit opt-in.
  int max_goods = 12;
};

// Streams every partition of {0..G-1} exactly once, in lexicographic
// restricted-growth order (trivial partition first, finest last).
class PartitionEnumerator {
 public:
  explicit PartitionEnumerator(int num_goods, EnumerationLimits limits = {});

  bool done() const { return done_; }
  const Partition& current() const { return current_; }
  void advance();

 private:
  Partition current_;
  std::array<std::uint8_t, Partition::kMaxGoods> max_prefix_{};
  bool done_ = false;
};

template <typename Fn>
void for_each_partition(int num_goods, Fn&& fn, EnumerationLimits limits = {}) {
  for (PartitionEnumerator it(num_goods, limits); !it.done(); it.advance()) {
    fn(it.current());
  }
}

std::vector<Partition> all_partitions(int num_goods, EnumerationLimits limits = {});

// True iff every block of `fine` is contained in a block of `coarse`.
// Both must partition the same good set.
bool is_refinement(const Partition& fine, const Partition& coarse);

}  // namespace sigcomp
