#include "sigcomp/partition.hpp"

#include <algorithm>
#include <charconv>
#include <string>

#include "sigcomp/errors.hpp"

namespace sigcomp {

namespace {

void check_good_count(int num_goods) {
  if (num_goods < 1) throw InputError("partition needs at least one good");
  if (num_goods > Partition::kMaxGoods) {
    throw InputError("partitions support at most " +
                     std::to_string(Partition::kMaxGoods) + " goods");
  }
}

}  // namespace

Partition Partition::trivial(int num_goods) {
  check_good_count(num_goods);
  Partition p;
  p.num_goods_ = static_cast<std::uint8_t>(num_goods);
  p.num_blocks_ = 1;
  return p;  // rgs all zero
}

Partition Partition::finest(int num_goods) {
  check_good_count(num_goods);
  Partition p;
  p.num_goods_ = static_cast<std::uint8_t>(num_goods);
  p.num_blocks_ = static_cast<std::uint8_t>(num_goods);
  for (int g = 0; g < num_goods; ++g) p.rgs_[g] = static_cast<std::uint8_t>(g);
  return p;
}

Partition Partition::from_rgs(std::span<const std::uint8_t> rgs) {
  check_good_count(static_cast<int>(rgs.size()));
  Partition p;
  p.num_goods_ = static_cast<std::uint8_t>(rgs.size());
  int max_label = -1;
  for (std::size_t g = 0; g < rgs.size(); ++g) {
    if (rgs[g] > max_label + 1) {
      throw InputError("not a restricted growth sequence at position " + std::to_string(g));
    }
    max_label = std::max(max_label, static_cast<int>(rgs[g]));
    p.rgs_[g] = rgs[g];
  }
  p.num_blocks_ = static_cast<std::uint8_t>(max_label + 1);
  return p;
}

Partition Partition::from_blocks(int num_goods,
                                 const std::vector<std::vector<int>>& blocks) {
  check_good_count(num_goods);
  std::array<int, kMaxGoods> raw_label;
  raw_label.fill(-1);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].empty()) throw InputError("partition block must be non-empty");
    for (int g : blocks[i]) {
      if (g < 0 || g >= num_goods) {
        throw InputError("good index " + std::to_string(g) + " out of range");
      }
      if (raw_label[g] != -1) {
        throw InputError("good " + std::to_string(g) + " appears in two blocks");
      }
      raw_label[g] = static_cast<int>(i);
    }
  }
  std::array<std::uint8_t, kMaxGoods> rgs{};
  std::array<int, kMaxGoods> relabel;
  relabel.fill(-1);
  int next = 0;
  for (int g = 0; g < num_goods; ++g) {
    if (raw_label[g] == -1) {
      throw InputError("good " + std::to_string(g) + " missing from partition");
    }
    if (relabel[raw_label[g]] == -1) relabel[raw_label[g]] = next++;
    rgs[g] = static_cast<std::uint8_t>(relabel[raw_label[g]]);
  }
  return from_rgs(std::span<const std::uint8_t>(rgs.data(), num_goods));
}

Partition Partition::parse(std::string_view text, int num_goods) {
  std::vector<std::vector<int>> blocks;
  std::vector<int> block;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find_first_of(",|", pos);
    std::string_view token =
        text.substr(pos, next == std::string_view::npos ? next : next - pos);
    int good = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), good);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw InputError("bad good index '" + std::string(token) + "' in partition '" +
                       std::string(text) + "'");
    }
    block.push_back(good);
    if (next == std::string_view::npos) break;
    if (text[next] == '|') {
      blocks.push_back(std::move(block));
      block.clear();
    }
    pos = next + 1;
  }
  blocks.push_back(std::move(block));
  return from_blocks(num_goods, blocks);
}

std::string Partition::to_string() const {
  std::string out;
  for (int label = 0; label < num_blocks_; ++label) {
    if (label > 0) out += '|';
    bool first = true;
    for (int g = 0; g < num_goods_; ++g) {
      if (rgs_[g] != label) continue;
      if (!first) out += ',';
      out += std::to_string(g);
      first = false;
    }
  }
  return out;
}

Partition::BlockMasks Partition::blocks() const {
  BlockMasks bm;
  bm.count = num_blocks_;
  for (int g = 0; g < num_goods_; ++g) bm.mask[rgs_[g]] |= GoodMask{1} << g;
  return bm;
}

std::uint64_t bell_number(int n) {
  if (n < 0 || n > Partition::kMaxGoods) {
    throw InputError("bell_number supports 0.." + std::to_string(Partition::kMaxGoods));
  }
  // Bell triangle: row starts with the previous row's last entry.
  std::array<std::uint64_t, Partition::kMaxGoods + 1> row{1};
  int length = 1;
  for (int i = 0; i < n; ++i) {
    std::array<std::uint64_t, Partition::kMaxGoods + 1> next{row[length - 1]};
    for (int j = 0; j < length; ++j) next[j + 1] = next[j] + row[j];
    ++length;
    row = next;
  }
  return row[0];
}

PartitionEnumerator::PartitionEnumerator(int num_goods, EnumerationLimits limits) {
  check_good_count(num_goods);
  if (num_goods > limits.max_goods) {
    throw BudgetError("partition enumeration over " + std::to_string(num_goods) +
                      " goods exceeds the guard of " + std::to_string(limits.max_goods) +
                      " (Bell(" + std::to_string(num_goods) + ") = " +
                      std::to_string(bell_number(num_goods)) + "); raise the limit to override");
  }
  current_.num_goods_ = static_cast<std::uint8_t>(num_goods);
  current_.num_blocks_ = 1;  // all-zero sequence: the trivial partition
}

void PartitionEnumerator::advance() {
  const int goods = current_.num_goods_;
  auto& rgs = current_.rgs_;
  max_prefix_[0] = 0;
  for (int g = 1; g < goods; ++g) {
    max_prefix_[g] = std::max(max_prefix_[g - 1], rgs[g]);
  }
  for (int g = goods - 1; g >= 1; --g) {
    if (rgs[g] <= max_prefix_[g - 1]) {
      ++rgs[g];
      std::uint8_t high = std::max<std::uint8_t>(max_prefix_[g - 1], rgs[g]);
      for (int tail = g + 1; tail < goods; ++tail) rgs[tail] = 0;
      current_.num_blocks_ = static_cast<std::uint8_t>(high + 1);
      return;
    }
  }
  done_ = true;
}

std::vector<Partition> all_partitions(int num_goods, EnumerationLimits limits) {
  std::vector<Partition> out;
  out.reserve(bell_number(num_goods));
  for_each_partition(num_goods, [&](const Partition& p) { out.push_back(p); }, limits);
  return out;
}

bool is_refinement(const Partition& fine, const Partition& coarse) {
  if (fine.num_goods() != coarse.num_goods()) {
    throw InputError("refinement check needs partitions of the same good set");
  }
  // Each fine block must sit inside one coarse block: the coarse label must
  // be constant across every fine block.
  std::array<int, Partition::kMaxGoods> coarse_of_fine;
  coarse_of_fine.fill(-1);
  for (int g = 0; g < fine.num_goods(); ++g) {
    int fb = fine.block_index(g);
    if (coarse_of_fine[fb] == -1) {
      coarse_of_fine[fb] = coarse.block_index(g);
    } else if (coarse_of_fine[fb] != coarse.block_index(g)) {
      return false;
    }
  }
  return true;
}

}  // namespace sigcomp
