#include "sigcomp/monopoly.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <vector>

#include "sigcomp/errors.hpp"

namespace sigcomp {

MonopolyAnalysis analyze_monopoly(const ValuationMatrix& v, const Budgets& budgets) {
  const int goods = v.num_goods();
  if (goods > Partition::kMaxGoods) {
    throw InputError("monopoly scan supports at most " +
                     std::to_string(Partition::kMaxGoods) + " goods");
  }
  const std::uint64_t bell = bell_number(goods);
  if (bell > static_cast<std::uint64_t>(budgets.max_profiles)) {
    throw BudgetError("monopoly scan needs Bell(" + std::to_string(goods) + ") = " +
                      std::to_string(bell) + " partitions, budget is " +
                      std::to_string(budgets.max_profiles));
  }

  // Top-two block valuations over all buyers, for every subset of goods.
  const std::size_t num_masks = std::size_t{1} << goods;
  std::vector<std::uint8_t> highest(num_masks, 0), second(num_masks, 0);
  for (std::size_t mask = 1; mask < num_masks; ++mask) {
    std::uint8_t v1 = 0, v2 = 0;
    for (int b = 0; b < v.num_buyers(); ++b) {
      auto value = static_cast<std::uint8_t>(std::popcount(v.support(b) & mask));
      if (value > v1) {
        v2 = v1;
        v1 = value;
      } else if (value > v2) {
        v2 = value;
      }
    }
    highest[mask] = v1;
    second[mask] = v2;
  }

  std::int64_t max_revenue = -1;
  std::int64_t worst_sw = 0, best_sw = 0;
  MonopolyAnalysis analysis;
  for_each_partition(goods, [&](const Partition& p) {
    std::int64_t revenue = 0, welfare = 0;
    for (GoodMask block : p.blocks()) {
      revenue += second[block];
      welfare += highest[block];
    }
    if (revenue > max_revenue) {
      max_revenue = revenue;
      analysis.revenue_maximizers.clear();
      analysis.revenue_maximizers.push_back(p);
      worst_sw = best_sw = welfare;
      analysis.worst_witness = analysis.best_witness = p;
    } else if (revenue == max_revenue) {
      analysis.revenue_maximizers.push_back(p);
      if (welfare < worst_sw) {
        worst_sw = welfare;
        analysis.worst_witness = p;
      }
      if (welfare > best_sw) {
        best_sw = welfare;
        analysis.best_witness = p;
      }
    }
  }, {.max_goods = Partition::kMaxGoods});

  analysis.max_revenue = Rational(max_revenue, goods);
  analysis.worst_sw_in_gamma1 = Rational(worst_sw, goods);
  analysis.best_sw_in_gamma1 = Rational(best_sw, goods);
  analysis.opt = Rational(demand_profile(v).p1, goods);
  return analysis;
}

bool BoundVerdicts::all_pass() const {
  return std::all_of(items.begin(), items.end(), [](const Verdict& v) {
    return v.status == Verdict::Status::pass;
  });
}

BoundVerdicts check_monopoly_bounds(const MonopolyAnalysis& analysis,
                                    const DemandProfile& dp, int num_goods) {
  const Rational worst = analysis.worst_sw_in_gamma1;
  const Rational best = analysis.best_sw_in_gamma1;
  const std::int64_t g = num_goods;
  BoundVerdicts out;
  out.items.push_back(Verdict::checked("thm43", worst, ">=", analysis.opt / 3));
  out.items.push_back(Verdict::checked("thm44", best, ">=", analysis.opt / 2));
  out.items.push_back(
      Verdict::checked("lem52_worst", worst, ">=", Rational(dp.p1 + dp.p2, 3 * g)));
  out.items.push_back(
      Verdict::checked("lem52_best", best, ">=", Rational(dp.p1 + dp.p2, 2 * g)));
  out.items.push_back(Verdict::checked("p2_floor", worst, ">=", Rational(dp.p2, g)));
  return out;
}

}  // namespace sigcomp
