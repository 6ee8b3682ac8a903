#pragma once

#include <vector>

#include "sigcomp/equilibrium.hpp"
#include "sigcomp/partition.hpp"
#include "sigcomp/rational.hpp"
#include "sigcomp/valuation.hpp"
#include "sigcomp/verdict.hpp"

namespace sigcomp {

// Exhaustive single-seller scan: the revenue-maximizing strategies (the set
// Gamma^1), the welfare range inside that set, and the welfare optimum p1/G.
struct MonopolyAnalysis {
  Rational max_revenue;
  std::vector<Partition> revenue_maximizers;  // canonical enumeration order
  Rational worst_sw_in_gamma1;
  Partition worst_witness;
  Rational best_sw_in_gamma1;
  Partition best_witness;
  Rational opt;  // p1 / G

  bool in_gamma1_prime(const Partition& p, const Rational& sw) const {
    return sw == best_sw_in_gamma1;
  }
};

// Scans all Bell(G) partitions; Bell(G) must fit budgets.max_profiles.
MonopolyAnalysis analyze_monopoly(const ValuationMatrix& v, const Budgets& budgets = {});

struct BoundVerdicts {
  std::vector<Verdict> items;
  bool all_pass() const;
};

// The monopoly welfare floors, checked as exact inequalities:
//   thm43:       worst SW in Gamma1 >= opt/3
//   thm44:       best  SW in Gamma1 >= opt/2
//   lem52_worst: worst SW in Gamma1 >= (p1+p2)/(3G)
//   lem52_best:  best  SW in Gamma1 >= (p1+p2)/(2G)
//   p2_floor:    worst SW in Gamma1 >= p2/G
BoundVerdicts check_monopoly_bounds(const MonopolyAnalysis& analysis,
                                    const DemandProfile& dp, int num_goods);

}  // namespace sigcomp
