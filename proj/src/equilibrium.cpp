#include "sigcomp/equilibrium.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <set>
#include <string>

#include "sigcomp/errors.hpp"

namespace sigcomp {

std::int64_t assignment_count(int num_sellers, int num_buyers) {
  std::int64_t count = 1;
  const std::int64_t cap = std::numeric_limits<std::int64_t>::max();
  for (int b = 0; b < num_buyers; ++b) {
    if (count > cap / num_sellers) return cap;
    count *= num_sellers;
  }
  return count;
}

namespace {

std::int64_t profile_count(std::uint64_t universe, int num_sellers) {
  std::int64_t count = 1;
  const std::int64_t cap = std::numeric_limits<std::int64_t>::max();
  for (int s = 0; s < num_sellers; ++s) {
    if (static_cast<std::uint64_t>(count) > static_cast<std::uint64_t>(cap) / universe) {
      return cap;
    }
    count *= static_cast<std::int64_t>(universe);
  }
  return count;
}

void check_profile(const ValuationMatrix& v, const SellerProfile& profile) {
  if (profile.partitions.empty()) throw InputError("seller profile is empty");
  for (const Partition& p : profile.partitions) {
    if (p.num_goods() != v.num_goods()) {
      throw InputError("partition good count does not match the instance");
    }
  }
}

void check_assignment_budget(int num_sellers, int num_buyers, const Budgets& budgets) {
  std::int64_t count = assignment_count(num_sellers, num_buyers);
  if (count > budgets.max_assignments) {
    throw BudgetError("assignment scan needs " + std::to_string(count) +
                      " assignments, budget is " + std::to_string(budgets.max_assignments));
  }
}

// Exhaustive walk over all S^B assignments of one subgame, depth-first over
// buyers so the per-seller per-block auction statistics update incrementally.
// Visits assignments in lexicographic order and hands every Nash assignment
// to the sink together with integer welfare/revenue numerators. Reusable
// across profiles without reallocation.
class SubgameScanner {
 public:
  explicit SubgameScanner(const ValuationMatrix& v) : v_(v), num_buyers_(v.num_buyers()) {
    choice_.assign(num_buyers_, 0);
  }

  void load(const SellerProfile& profile) {
    num_sellers_ = profile.num_sellers();
    block_mask_.clear();
    block_offset_.assign(num_sellers_ + 1, 0);
    for (int s = 0; s < num_sellers_; ++s) {
      for (GoodMask mask : profile.partitions[s].blocks()) block_mask_.push_back(mask);
      block_offset_[s + 1] = static_cast<int>(block_mask_.size());
    }
    const int total = static_cast<int>(block_mask_.size());
    value_.resize(static_cast<std::size_t>(num_buyers_) * total);
    for (int b = 0; b < num_buyers_; ++b) {
      for (int t = 0; t < total; ++t) {
        value_[static_cast<std::size_t>(b) * total + t] =
            static_cast<std::uint8_t>(std::popcount(v_.support(b) & block_mask_[t]));
      }
    }
    top1_.assign(total, 0);
    top2_.assign(total, 0);
    top_buyer_.assign(total, -1);
    revenue_buf_.assign(num_sellers_, 0);
    undo_.clear();
  }

  // Sink signature: (choice, welfare_numerator /* over S*G */,
  //                  revenue_numerators /* per seller, over G */).
  template <typename Sink>
  void scan(Sink&& sink) {
    descend(0, sink);
  }

 private:
  struct UndoEntry {
    std::int32_t block;
    std::uint8_t top1, top2;
    std::int8_t top_buyer;
  };

  int value_at(int buyer, int block) const {
    return value_[static_cast<std::size_t>(buyer) * block_mask_.size() + block];
  }

  void push_buyer(int buyer, int seller) {
    for (int t = block_offset_[seller]; t < block_offset_[seller + 1]; ++t) {
      int v = value_at(buyer, t);
      if (v > top1_[t]) {
        undo_.push_back({t, top1_[t], top2_[t], top_buyer_[t]});
        top2_[t] = top1_[t];
        top1_[t] = static_cast<std::uint8_t>(v);
        top_buyer_[t] = static_cast<std::int8_t>(buyer);
      } else if (v > top2_[t]) {
        undo_.push_back({t, top1_[t], top2_[t], top_buyer_[t]});
        top2_[t] = static_cast<std::uint8_t>(v);
      }
    }
  }

  void pop_to(std::size_t undo_mark) {
    while (undo_.size() > undo_mark) {
      const UndoEntry& e = undo_.back();
      top1_[e.block] = e.top1;
      top2_[e.block] = e.top2;
      top_buyer_[e.block] = e.top_buyer;
      undo_.pop_back();
    }
  }

  // Surplus of `buyer` at its current seller: positive only for the block
  // winner, who pays the second-highest bid.
  int current_utility(int buyer, int seller) const {
    int total = 0;
    for (int t = block_offset_[seller]; t < block_offset_[seller + 1]; ++t) {
      if (top_buyer_[t] == buyer) total += top1_[t] - top2_[t];
    }
    return total;
  }

  // Surplus of `buyer` if it joined `seller` (whose stats exclude it): it
  // wins exactly the blocks where it outbids the standing top valuation.
  int deviation_utility(int buyer, int seller) const {
    int total = 0;
    for (int t = block_offset_[seller]; t < block_offset_[seller + 1]; ++t) {
      int v = value_at(buyer, t);
      if (v > top1_[t]) total += v - top1_[t];
    }
    return total;
  }

  bool is_nash_here() const {
    for (int b = 0; b < num_buyers_; ++b) {
      const int here = choice_[b];
      const int stay = current_utility(b, here);
      for (int s = 0; s < num_sellers_; ++s) {
        if (s == here) continue;
        if (deviation_utility(b, s) > stay) return false;
      }
    }
    return true;
  }

  template <typename Sink>
  void descend(int depth, Sink& sink) {
    if (depth == num_buyers_) {
      if (!is_nash_here()) return;
      std::int64_t welfare = 0;
      for (int s = 0; s < num_sellers_; ++s) {
        std::int64_t revenue = 0;
        for (int t = block_offset_[s]; t < block_offset_[s + 1]; ++t) {
          welfare += top1_[t];
          revenue += top2_[t];
        }
        revenue_buf_[s] = revenue;
      }
      sink(choice_, welfare, revenue_buf_);
      return;
    }
    for (int s = 0; s < num_sellers_; ++s) {
      const std::size_t mark = undo_.size();
      push_buyer(depth, s);
      choice_[depth] = static_cast<std::uint8_t>(s);
      descend(depth + 1, sink);
      pop_to(mark);
    }
  }

  const ValuationMatrix& v_;
  int num_buyers_;
  int num_sellers_ = 0;
  std::vector<GoodMask> block_mask_;
  std::vector<int> block_offset_;
  std::vector<std::uint8_t> value_;
  std::vector<std::uint8_t> top1_, top2_;
  std::vector<std::int8_t> top_buyer_;
  std::vector<std::uint8_t> choice_;
  std::vector<std::int64_t> revenue_buf_;
  std::vector<UndoEntry> undo_;
};

[[noreturn]] void report_empty_nash(const SellerProfile& profile) {
  // The buyer subgame is a potential game; an empty pure Nash set would
  // falsify that or expose a scanner bug.
  throw std::logic_error("no pure Nash assignment found in subgame " + profile.to_string());
}

// potential-max and per-seller punish selections of one subgame, with the
// revenue vector at the potential-max assignment. Numerators only; the
// denominators are S*G (welfare) and G (revenue).
struct SubgameSelections {
  bool any_nash = false;
  std::vector<std::uint8_t> potmax_choice;
  std::int64_t potmax_welfare = -1;
  std::vector<std::int64_t> potmax_revenue;
  std::vector<std::vector<std::uint8_t>> punish_choice;  // per seller
  std::vector<std::int64_t> punish_revenue;              // per seller
};

SubgameSelections select_all(const ValuationMatrix& v, const SellerProfile& profile) {
  const int sellers = profile.num_sellers();
  SubgameSelections sel;
  sel.punish_choice.resize(sellers);
  sel.punish_revenue.assign(sellers, std::numeric_limits<std::int64_t>::max());
  SubgameScanner scanner(v);
  scanner.load(profile);
  scanner.scan([&](const std::vector<std::uint8_t>& choice, std::int64_t welfare,
                   const std::vector<std::int64_t>& revenue) {
    sel.any_nash = true;
    if (welfare > sel.potmax_welfare) {
      sel.potmax_welfare = welfare;
      sel.potmax_choice = choice;
      sel.potmax_revenue = revenue;
    }
    for (int s = 0; s < sellers; ++s) {
      if (revenue[s] < sel.punish_revenue[s]) {
        sel.punish_revenue[s] = revenue[s];
        sel.punish_choice[s] = choice;
      }
    }
  });
  if (!sel.any_nash) report_empty_nash(profile);
  return sel;
}

}  // namespace

SubgameResult best_response_dynamics(const ValuationMatrix& v,
                                     const SellerProfile& profile,
                                     BuyerAssignment start) {
  check_consistent(v, profile, start);
  const int sellers = profile.num_sellers();
  const int buyers = v.num_buyers();
  const std::int64_t step_cap = assignment_count(sellers, buyers);
  SubgameResult result;
  result.assignment = std::move(start);
  bool moved = true;
  while (moved) {
    moved = false;
    for (int b = 0; b < buyers; ++b) {
      Rational stay = buyer_utility(v, profile, result.assignment, b);
      int best_seller = -1;
      Rational best = stay;
      const int here = result.assignment.seller_of(b);
      for (int s = 0; s < sellers; ++s) {
        if (s == here) continue;
        BuyerAssignment deviated = result.assignment;
        deviated.choice[b] = static_cast<std::uint8_t>(s);
        Rational gain = buyer_utility(v, profile, deviated, b);
        if (gain > best) {
          best = gain;
          best_seller = s;
        }
      }
      if (best_seller >= 0) {
        result.assignment.choice[b] = static_cast<std::uint8_t>(best_seller);
        ++result.steps;
        moved = true;
        if (result.steps > step_cap) {
          throw std::logic_error("best response dynamics exceeded the S^B step cap");
        }
      }
    }
  }
  result.is_nash = is_nash_assignment(v, profile, result.assignment);
  result.potential = Rational(sellers, 1) * social_welfare(v, profile, result.assignment);
  return result;
}

bool is_nash_assignment(const ValuationMatrix& v, const SellerProfile& profile,
                        const BuyerAssignment& assignment) {
  check_consistent(v, profile, assignment);
  for (int b = 0; b < v.num_buyers(); ++b) {
    Rational stay = buyer_utility(v, profile, assignment, b);
    for (int s = 0; s < profile.num_sellers(); ++s) {
      if (s == assignment.seller_of(b)) continue;
      BuyerAssignment deviated = assignment;
      deviated.choice[b] = static_cast<std::uint8_t>(s);
      if (buyer_utility(v, profile, deviated, b) > stay) return false;
    }
  }
  return true;
}

std::vector<BuyerAssignment> enumerate_subgame_nash(const ValuationMatrix& v,
                                                    const SellerProfile& profile,
                                                    const Budgets& budgets) {
  check_profile(v, profile);
  check_assignment_budget(profile.num_sellers(), v.num_buyers(), budgets);
  std::vector<BuyerAssignment> result;
  SubgameScanner scanner(v);
  scanner.load(profile);
  scanner.scan([&](const std::vector<std::uint8_t>& choice, std::int64_t,
                   const std::vector<std::int64_t>&) {
    result.push_back(BuyerAssignment{choice});
  });
  if (result.empty()) report_empty_nash(profile);
  return result;
}

BuyerAssignment select_buyer_equilibrium(const ValuationMatrix& v,
                                         const SellerProfile& profile,
                                         SelectionRule rule, const Budgets& budgets) {
  check_profile(v, profile);
  check_assignment_budget(profile.num_sellers(), v.num_buyers(), budgets);
  if (rule.kind == SelectionRule::Kind::punish &&
      (rule.seller < 0 || rule.seller >= profile.num_sellers())) {
    throw InputError("punish rule names seller " + std::to_string(rule.seller) +
                     ", profile has " + std::to_string(profile.num_sellers()));
  }
  SubgameSelections sel = select_all(v, profile);
  if (rule.kind == SelectionRule::Kind::potential_max) {
    return BuyerAssignment{std::move(sel.potmax_choice)};
  }
  return BuyerAssignment{std::move(sel.punish_choice[rule.seller])};
}

namespace {

// Mixed-radix profile rank over a fixed partition universe, seller 0 the
// most significant digit, so rank order equals lexicographic profile order.
struct ProfileSpace {
  std::vector<Partition> universe;
  int sellers = 0;
  std::int64_t profiles = 0;

  void load_profile(const std::vector<std::uint32_t>& digits, SellerProfile& out) const {
    out.partitions.resize(sellers, universe.front());
    for (int s = 0; s < sellers; ++s) out.partitions[s] = universe[digits[s]];
  }

  // Rank of the profile with seller `skip`'s digit removed.
  std::int64_t context_rank(const std::vector<std::uint32_t>& digits, int skip) const {
    std::int64_t rank = 0;
    for (int s = 0; s < sellers; ++s) {
      if (s == skip) continue;
      rank = rank * static_cast<std::int64_t>(universe.size()) + digits[s];
    }
    return rank;
  }

  void advance(std::vector<std::uint32_t>& digits) const {
    for (int s = sellers - 1; s >= 0; --s) {
      if (++digits[s] < universe.size()) return;
      digits[s] = 0;
    }
  }
};

ProfileSpace make_profile_space(const ValuationMatrix& v, int num_sellers,
                                const Budgets& budgets) {
  if (num_sellers < 1) throw InputError("need at least one seller");
  const int goods = v.num_goods();
  if (goods > Partition::kMaxGoods) {
    throw InputError("SPE search supports at most " +
                     std::to_string(Partition::kMaxGoods) + " goods");
  }
  const std::uint64_t bell = bell_number(goods);
  const std::int64_t profiles = profile_count(bell, num_sellers);
  if (profiles > budgets.max_profiles) {
    throw BudgetError("profile scan needs Bell(" + std::to_string(goods) + ")^" +
                      std::to_string(num_sellers) + " = " + std::to_string(profiles) +
                      " profiles, budget is " + std::to_string(budgets.max_profiles));
  }
  ProfileSpace space;
  space.sellers = num_sellers;
  space.profiles = profiles;
  space.universe = all_partitions(goods, {.max_goods = Partition::kMaxGoods});
  return space;
}

struct TopTwoRevenue {
  std::int64_t best = -1;
  std::uint32_t best_digit = 0;
  std::int64_t second = -1;
};

}  // namespace

std::vector<SpeSummary> find_pure_spe_profiles(const ValuationMatrix& v,
                                               int num_sellers, const Budgets& budgets) {
  ProfileSpace space = make_profile_space(v, num_sellers, budgets);
  check_assignment_budget(num_sellers, v.num_buyers(), budgets);
  const std::int64_t num_profiles = space.profiles;
  const std::size_t universe = space.universe.size();
  const int sellers = num_sellers;

  // Pass 1: for every profile, the potential-max welfare with its revenue
  // vector, and the per-seller punish revenues.
  std::vector<std::int64_t> potmax_welfare(num_profiles);
  std::vector<std::int64_t> onpath_revenue(static_cast<std::size_t>(num_profiles) * sellers);
  std::vector<std::int64_t> punish_revenue(static_cast<std::size_t>(num_profiles) * sellers);
  {
    SubgameScanner scanner(v);
    SellerProfile profile;
    std::vector<std::uint32_t> digits(sellers, 0);
    for (std::int64_t rank = 0; rank < num_profiles; ++rank, space.advance(digits)) {
      space.load_profile(digits, profile);
      scanner.load(profile);
      std::int64_t best_welfare = -1;
      std::int64_t* onpath = &onpath_revenue[rank * sellers];
      std::int64_t* punish = &punish_revenue[rank * sellers];
      std::fill(punish, punish + sellers, std::numeric_limits<std::int64_t>::max());
      scanner.scan([&](const std::vector<std::uint8_t>&, std::int64_t welfare,
                       const std::vector<std::int64_t>& revenue) {
        if (welfare > best_welfare) {
          best_welfare = welfare;
          std::copy(revenue.begin(), revenue.end(), onpath);
        }
        for (int s = 0; s < sellers; ++s) punish[s] = std::min(punish[s], revenue[s]);
      });
      if (best_welfare < 0) report_empty_nash(profile);
      potmax_welfare[rank] = best_welfare;
    }
  }

  // Pass 2: per (seller, other-sellers context) the two best punish revenues
  // over the deviating seller's partition, so the best deviation excluding
  // the on-path partition becomes an O(1) lookup.
  const std::int64_t contexts = num_profiles / static_cast<std::int64_t>(universe);
  std::vector<TopTwoRevenue> best_dev(static_cast<std::size_t>(sellers) * contexts);
  {
    std::vector<std::uint32_t> digits(sellers, 0);
    for (std::int64_t rank = 0; rank < num_profiles; ++rank, space.advance(digits)) {
      for (int s = 0; s < sellers; ++s) {
        TopTwoRevenue& slot =
            best_dev[static_cast<std::size_t>(s) * contexts + space.context_rank(digits, s)];
        const std::int64_t revenue = punish_revenue[rank * sellers + s];
        if (revenue > slot.best) {
          slot.second = slot.best;
          slot.best = revenue;
          slot.best_digit = digits[s];
        } else if (revenue > slot.second) {
          slot.second = revenue;
        }
      }
    }
  }

  // Pass 3: a profile survives when no seller's best deviation beats its
  // on-path revenue.
  std::vector<SpeSummary> result;
  {
    std::vector<std::uint32_t> digits(sellers, 0);
    for (std::int64_t rank = 0; rank < num_profiles; ++rank, space.advance(digits)) {
      bool is_spe = true;
      for (int s = 0; s < sellers && is_spe; ++s) {
        const TopTwoRevenue& slot =
            best_dev[static_cast<std::size_t>(s) * contexts + space.context_rank(digits, s)];
        const std::int64_t best_alternative =
            slot.best_digit == digits[s] ? slot.second : slot.best;
        if (best_alternative > onpath_revenue[rank * sellers + s]) is_spe = false;
      }
      if (is_spe) {
        SpeSummary summary;
        space.load_profile(digits, summary.profile);
        summary.welfare = Rational(potmax_welfare[rank],
                                   static_cast<std::int64_t>(sellers) * v.num_goods());
        result.push_back(std::move(summary));
      }
    }
  }
  return result;
}

SpeCertificate build_spe_certificate(const ValuationMatrix& v,
                                     const SellerProfile& on_path,
                                     const Budgets& budgets) {
  check_profile(v, on_path);
  const int sellers = on_path.num_sellers();
  const int goods = v.num_goods();
  SpeCertificate cert;
  cert.on_path = on_path;
  cert.universe_note = "on-path profile plus every unilateral seller deviation over the " +
                       std::to_string(bell_number(goods)) + " partitions of " +
                       std::to_string(goods) + " goods";
  cert.contingent.table[on_path] =
      select_buyer_equilibrium(v, on_path, SelectionRule::potential_max(), budgets);
  for (int s = 0; s < sellers; ++s) {
    for_each_partition(goods, [&](const Partition& alternative) {
      if (alternative == on_path.partitions[s]) return;
      SellerProfile deviated = on_path;
      deviated.partitions[s] = alternative;
      cert.contingent.table[deviated] =
          select_buyer_equilibrium(v, deviated, SelectionRule::punish(s), budgets);
    }, {.max_goods = Partition::kMaxGoods});
  }
  return cert;
}

std::vector<PureSpe> find_pure_spe(const ValuationMatrix& v, int num_sellers,
                                   const Budgets& budgets) {
  std::vector<PureSpe> result;
  for (SpeSummary& summary : find_pure_spe_profiles(v, num_sellers, budgets)) {
    PureSpe spe;
    spe.certificate = build_spe_certificate(v, summary.profile, budgets);
    spe.profile = std::move(summary.profile);
    spe.welfare = summary.welfare;
    result.push_back(std::move(spe));
  }
  return result;
}

std::string CertViolation::describe() const {
  if (kind == Kind::buyer_deviation) {
    return "buyer " + std::to_string(agent) + " gains " + to_fraction_string(delta) +
           " by switching to seller " + std::to_string(alternative_seller) +
           " in subgame " + subgame.to_string();
  }
  return "seller " + std::to_string(agent) + " gains " + to_fraction_string(delta) +
         " by deviating to partition " + alternative_partition.front().to_string() +
         " from profile " + subgame.to_string();
}

CertificateCheck verify_spe_certificate(const ValuationMatrix& v,
                                        const SpeCertificate& cert,
                                        const Budgets& budgets) {
  (void)budgets;
  check_profile(v, cert.on_path);
  const int sellers = cert.on_path.num_sellers();
  const int goods = v.num_goods();

  const auto entry_for = [&](const SellerProfile& profile) -> const BuyerAssignment& {
    auto it = cert.contingent.table.find(profile);
    if (it == cert.contingent.table.end()) {
      throw InputError("certificate table is missing profile \"" + profile.to_string() +
                       "\"");
    }
    return it->second;
  };

  // Totality over the declared universe comes first so an incomplete table
  // is an input error, not a verdict.
  entry_for(cert.on_path);
  for (int s = 0; s < sellers; ++s) {
    for_each_partition(goods, [&](const Partition& alternative) {
      if (alternative == cert.on_path.partitions[s]) return;
      SellerProfile deviated = cert.on_path;
      deviated.partitions[s] = alternative;
      entry_for(deviated);
    }, {.max_goods = Partition::kMaxGoods});
  }

  CertificateCheck check;

  // (a) every table entry must be a Nash assignment of its subgame.
  for (const auto& [profile, assignment] : cert.contingent.table) {
    check_profile(v, profile);
    check_consistent(v, profile, assignment);
    for (int b = 0; b < v.num_buyers(); ++b) {
      Rational stay = buyer_utility(v, profile, assignment, b);
      for (int s = 0; s < profile.num_sellers(); ++s) {
        if (s == assignment.seller_of(b)) continue;
        BuyerAssignment deviated = assignment;
        deviated.choice[b] = static_cast<std::uint8_t>(s);
        Rational delta = buyer_utility(v, profile, deviated, b) - stay;
        if (delta > Rational(0)) {
          check.violations.push_back(CertViolation{
              CertViolation::Kind::buyer_deviation, profile, b, s, {}, delta});
        }
      }
    }
  }

  // (b) no seller may profit from any unilateral deviation, with the table
  // dictating the buyers' response everywhere.
  const BuyerAssignment& on_path_play = entry_for(cert.on_path);
  for (int s = 0; s < sellers; ++s) {
    Rational on_path_revenue = seller_utility(v, cert.on_path, on_path_play, s);
    for_each_partition(goods, [&](const Partition& alternative) {
      if (alternative == cert.on_path.partitions[s]) return;
      SellerProfile deviated = cert.on_path;
      deviated.partitions[s] = alternative;
      Rational delta =
          seller_utility(v, deviated, entry_for(deviated), s) - on_path_revenue;
      if (delta > Rational(0)) {
        check.violations.push_back(CertViolation{CertViolation::Kind::seller_deviation,
                                                 deviated, s, -1,
                                                 {alternative}, delta});
      }
    }, {.max_goods = Partition::kMaxGoods});
  }

  check.pass = check.violations.empty();
  return check;
}

Rational compute_opt(const ValuationMatrix& v, int num_sellers, const Budgets& budgets) {
  if (num_sellers < 1) throw InputError("need at least one seller");
  check_assignment_budget(num_sellers, v.num_buyers(), budgets);
  // With full disclosure the welfare of an assignment depends only on the
  // union of supports each seller attracts; sellers are interchangeable, so
  // a DP over sorted cover tuples visits every reachable outcome.
  std::set<std::vector<GoodMask>> states;
  states.insert(std::vector<GoodMask>(num_sellers, 0));
  for (int b = 0; b < v.num_buyers(); ++b) {
    std::set<std::vector<GoodMask>> next;
    for (const auto& state : states) {
      for (int s = 0; s < num_sellers; ++s) {
        if (s > 0 && state[s] == state[s - 1]) continue;  // symmetric branch
        std::vector<GoodMask> grown = state;
        grown[s] |= v.support(b);
        std::sort(grown.begin(), grown.end());
        next.insert(std::move(grown));
      }
    }
    states = std::move(next);
  }
  std::int64_t best_cover = 0;
  for (const auto& state : states) {
    std::int64_t cover = 0;
    for (GoodMask mask : state) cover += std::popcount(mask);
    best_cover = std::max(best_cover, cover);
  }
  return Rational(best_cover, static_cast<std::int64_t>(num_sellers) * v.num_goods());
}

}  // namespace sigcomp
