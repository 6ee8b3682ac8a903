#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sigcomp/game.hpp"

namespace sigcomp {

// Caps on the two exhaustive dimensions: seller profiles (Bell(G)^S, or
// Bell(G) for the monopoly scan) and buyer assignments (S^B).
struct Budgets {
  std::int64_t max_profiles = 1'000'000;
  std::int64_t max_assignments = 10'000'000;
};

// S^B with saturation, for budget checks and the step cap.
std::int64_t assignment_count(int num_sellers, int num_buyers);

struct SubgameResult {
  BuyerAssignment assignment;
  bool is_nash = false;
  std::int64_t steps = 0;   // strict-improvement moves taken
  Rational potential;       // S * SW at the final assignment
};

// Sequential best response: buyers in index order, move only on strict
// improvement, lowest seller index among best deviations. The welfare
// potential makes termination certain; a step cap of S^B is asserted and
// never reached.
SubgameResult best_response_dynamics(const ValuationMatrix& v,
                                     const SellerProfile& profile,
                                     BuyerAssignment start);

// True iff no buyer can strictly gain by switching sellers unilaterally.
bool is_nash_assignment(const ValuationMatrix& v, const SellerProfile& profile,
                        const BuyerAssignment& assignment);

// Every pure Nash assignment of the buyer subgame, in lexicographic order.
// Non-empty for every profile (the subgame is a potential game).
std::vector<BuyerAssignment> enumerate_subgame_nash(const ValuationMatrix& v,
                                                    const SellerProfile& profile,
                                                    const Budgets& budgets = {});

// Which subgame equilibrium the buyers coordinate on. potential_max picks
// the welfare-maximal Nash assignment, punish(s) the one minimizing seller
// s's revenue; ties break lexicographically in both cases.
struct SelectionRule {
  enum class Kind { potential_max, punish };
  Kind kind = Kind::potential_max;
  int seller = -1;

  static SelectionRule potential_max() { return {Kind::potential_max, -1}; }
  static SelectionRule punish(int seller) { return {Kind::punish, seller}; }
};

BuyerAssignment select_buyer_equilibrium(const ValuationMatrix& v,
                                         const SellerProfile& profile,
                                         SelectionRule rule,
                                         const Budgets& budgets = {});

// A checkable SPE claim: the on-path profile plus the buyers' contingent
// play on it and on every unilateral seller deviation.
struct SpeCertificate {
  SellerProfile on_path;
  ContingentBuyerStrategy contingent;
  std::string universe_note;
};

struct SpeSummary {
  SellerProfile profile;
  Rational welfare;  // SW at the on-path potential-max equilibrium
};

struct PureSpe {
  SellerProfile profile;
  SpeCertificate certificate;
  Rational welfare;
};

// Scans all Bell(G)^S pure seller profiles. On path buyers play the
// potential-max equilibrium; after seller s deviates they play punish(s).
// Returns every profile no seller can strictly profit from leaving, in
// enumeration order. May legitimately be empty: existence of an SPE is only
// guaranteed once sellers may mix, which is out of scope here.
std::vector<SpeSummary> find_pure_spe_profiles(const ValuationMatrix& v,
                                               int num_sellers,
                                               const Budgets& budgets = {});

// Materializes the contingent table for one profile under the same
// selection rules (used for certificate emission; the table has
// S*(Bell(G)-1)+1 entries).
SpeCertificate build_spe_certificate(const ValuationMatrix& v,
                                     const SellerProfile& on_path,
                                     const Budgets& budgets = {});

std::vector<PureSpe> find_pure_spe(const ValuationMatrix& v, int num_sellers,
                                   const Budgets& budgets = {});

struct CertViolation {
  enum class Kind { buyer_deviation, seller_deviation };
  Kind kind;
  SellerProfile subgame;      // where the violation occurs
  int agent = -1;             // buyer or seller index
  int alternative_seller = -1;              // buyer deviations
  std::vector<Partition> alternative_partition;  // seller deviations (0 or 1 entry)
  Rational delta;             // strict utility gain of the deviation

  std::string describe() const;
};

struct CertificateCheck {
  bool pass = false;
  std::vector<CertViolation> violations;
};

// Checks (a) every table entry is a Nash assignment of its subgame and
// (b) no seller strictly gains by any unilateral deviation given the table.
// Any subgame-Nash entry is accepted; the punish rule is not mandated.
// Throws InputError if the table misses a universe profile.
CertificateCheck verify_spe_certificate(const ValuationMatrix& v,
                                        const SpeCertificate& cert,
                                        const Budgets& budgets = {});

// Maximal social welfare over all buyer assignments with every seller fully
// disclosing (refinement can only help, so this is the game's optimum).
Rational compute_opt(const ValuationMatrix& v, int num_sellers,
                     const Budgets& budgets = {});

}  // namespace sigcomp
