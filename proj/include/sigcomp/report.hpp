#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sigcomp/instance.hpp"
#include "sigcomp/monopoly.hpp"
#include "sigcomp/verdict.hpp"

namespace sigcomp {

struct SpeEntry {
  SellerProfile profile;
  Rational welfare;
};

// Everything the welfare-bound theorems talk about for one instance, plus
// the pass/fail verdict of each applicable inequality. Searches that blow
// their budget leave their section empty and their verdicts "skip".
struct BoundReport {
  std::string label;
  int sellers = 0;
  int buyers = 0;
  int goods = 0;

  DemandProfile dp;
  std::optional<Rational> rho;  // p2/c1, undefined when c1 == 0

  std::optional<MonopolyAnalysis> monopoly;  // on the 1-seller game
  std::string monopoly_skip_reason;

  bool spe_searched = false;
  std::string spe_skip_reason;
  std::vector<SpeEntry> spe;
  std::optional<Rational> spe_sw_min;
  std::optional<Rational> spe_sw_max;

  std::optional<Rational> opt;  // S-seller optimum
  std::string opt_skip_reason;

  // max over SPE of SW / worst Gamma1 welfare; min over SPE of SW / best.
  std::optional<Rational> ratio_max;
  std::optional<Rational> ratio_min;

  std::vector<Verdict> verdicts;

  bool all_verdicts_pass() const;
  bool any_verdict_failed() const;
};

BoundReport run_ratio_experiment(const Instance& instance, const Budgets& budgets = {});

enum class OutputFormat { table, csv, json };
OutputFormat parse_output_format(const std::string& name);

std::string report_csv_header();
std::string report_csv_row(const BoundReport& report);
std::string report_table(const BoundReport& report);
nlohmann::json report_json(const BoundReport& report);

// The theorem sweep: every binary matrix with B*G <= max_cells for each
// seller count, then `random_count` seeded random instances. Rows stream to
// `out` in instance order no matter how many worker threads run.
struct SweepConfig {
  int max_cells = 12;
  std::vector<int> sellers = {2, 3};
  int random_count = 500;
  int random_max_buyers = 6;
  int random_max_goods = 6;
  std::uint64_t seed = 12345;
  int jobs = 0;  // 0 = hardware concurrency
  Budgets budgets;
};

struct SweepOutcome {
  std::int64_t instances = 0;
  std::int64_t failed_instances = 0;
  std::int64_t failed_verdicts = 0;
  std::int64_t skipped_verdicts = 0;
  std::int64_t passed_verdicts = 0;
};

SweepOutcome run_sweep(const SweepConfig& config, std::ostream& out);

}  // namespace sigcomp
