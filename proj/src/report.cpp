#include "sigcomp/report.hpp"

#include <algorithm>
#include <atomic>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "sigcomp/errors.hpp"

namespace sigcomp {

bool BoundReport::all_verdicts_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) {
    return v.status != Verdict::Status::fail;
  });
}

bool BoundReport::any_verdict_failed() const { return !all_verdicts_pass(); }

namespace {

bool positive_demand(const ValuationMatrix& v) {
  for (int b = 0; b < v.num_buyers(); ++b) {
    if (v.support(b) == 0) return false;
  }
  return true;
}

constexpr const char* kNoSpeNote = "no pure-seller SPE found; nothing to check";

}  // namespace

BoundReport run_ratio_experiment(const Instance& instance, const Budgets& budgets) {
  const ValuationMatrix& v = instance.valuation;
  const int sellers = instance.sellers;
  const int buyers = v.num_buyers();
  const int goods = v.num_goods();

  BoundReport r;
  r.label = instance.label.value_or("");
  r.sellers = sellers;
  r.buyers = buyers;
  r.goods = goods;
  r.dp = demand_profile(v);
  if (r.dp.c1 > 0) r.rho = Rational(r.dp.p2, r.dp.c1);

  std::optional<MonopolyAnalysis> monopoly;
  try {
    monopoly = analyze_monopoly(v, budgets);
  } catch (const BudgetError& e) {
    r.monopoly_skip_reason = e.what();
  }
  r.monopoly = monopoly;

  try {
    std::vector<SpeSummary> found = find_pure_spe_profiles(v, sellers, budgets);
    r.spe_searched = true;
    r.spe.reserve(found.size());
    for (SpeSummary& s : found) {
      if (!r.spe_sw_min || s.welfare < *r.spe_sw_min) r.spe_sw_min = s.welfare;
      if (!r.spe_sw_max || s.welfare > *r.spe_sw_max) r.spe_sw_max = s.welfare;
      r.spe.push_back(SpeEntry{std::move(s.profile), s.welfare});
    }
  } catch (const BudgetError& e) {
    r.spe_skip_reason = e.what();
  }

  try {
    r.opt = compute_opt(v, sellers, budgets);
  } catch (const BudgetError& e) {
    r.opt_skip_reason = e.what();
  }

  if (monopoly && r.spe_sw_max) {
    if (monopoly->worst_sw_in_gamma1 > Rational(0)) {
      r.ratio_max = *r.spe_sw_max / monopoly->worst_sw_in_gamma1;
    }
    if (monopoly->best_sw_in_gamma1 > Rational(0)) {
      r.ratio_min = *r.spe_sw_min / monopoly->best_sw_in_gamma1;
    }
  }

  // Welfare caps hold for every strategy tuple, so the optimum itself must
  // respect them; catching a violation here would be a solver bug or a
  // falsified lemma.
  if (r.opt && r.spe_sw_max && *r.spe_sw_max > *r.opt) {
    throw std::logic_error("SPE welfare exceeds the computed optimum");
  }

  // Monopoly floors.
  if (monopoly) {
    BoundVerdicts bounds = check_monopoly_bounds(*monopoly, r.dp, goods);
    for (Verdict& verdict : bounds.items) r.verdicts.push_back(std::move(verdict));
  } else {
    for (const char* name : {"thm43", "thm44", "lem52_worst", "lem52_best", "p2_floor"}) {
      r.verdicts.push_back(Verdict::skipped(name, r.monopoly_skip_reason));
    }
  }

  // Welfare cap on the competitive optimum.
  if (r.opt) {
    Rational cap(r.dp.c1 + std::min<std::int64_t>(sellers, buyers) * r.dp.p2,
                 static_cast<std::int64_t>(sellers) * goods);
    r.verdicts.push_back(Verdict::checked("lem61", *r.opt, "<=", cap));
  } else {
    r.verdicts.push_back(Verdict::skipped("lem61", r.opt_skip_reason));
  }

  const bool demand_ok = positive_demand(v);
  const bool competition = sellers >= 2;
  const auto spe_quantified = [&](const char* name, bool preconditions,
                                  const std::string& precondition_note,
                                  auto&& make) {
    if (!preconditions) {
      r.verdicts.push_back(Verdict::skipped(name, precondition_note));
      return;
    }
    if (!r.spe_searched) {
      r.verdicts.push_back(Verdict::skipped(name, r.spe_skip_reason));
      return;
    }
    if (r.spe.empty()) {
      r.verdicts.push_back(Verdict::skipped(name, kNoSpeNote));
      return;
    }
    r.verdicts.push_back(make());
  };

  // SPE welfare vs the competitive optimum: SW * G >= OPT.
  spe_quantified("thm52", competition && buyers >= sellers && demand_ok && r.opt.has_value(),
                 !r.opt ? r.opt_skip_reason
                        : "needs S >= 2, B >= S and positive demand for every buyer",
                 [&] {
                   return Verdict::checked("thm52", *r.spe_sw_min * Rational(goods), ">=",
                                           *r.opt);
                 });

  const bool monopoly_ratio_inputs = monopoly.has_value();
  const std::string monopoly_note =
      monopoly ? std::string("needs S >= 2 and B >= 2") : r.monopoly_skip_reason;

  // Competition gains at most a factor 1 + 1/S over any revenue maximizer.
  spe_quantified("thm62", competition && buyers >= 2 && monopoly_ratio_inputs,
                 monopoly_note, [&] {
                   return Verdict::checked(
                       "thm62", *r.spe_sw_max * Rational(sellers), "<=",
                       Rational(sellers + 1) * monopoly->worst_sw_in_gamma1);
                 });

  // ... and never beats the welfare-best revenue maximizer at all.
  spe_quantified("thm64", competition && buyers >= 2 && monopoly_ratio_inputs,
                 monopoly_note, [&] {
                   return Verdict::checked(
                       "thm64", *r.spe_sw_max * Rational(sellers), "<=",
                       Rational(std::min(sellers, buyers)) * monopoly->best_sw_in_gamma1);
                 });

  // Competition loses at most a factor G against any revenue maximizer.
  spe_quantified("thm66",
                 competition && buyers >= sellers && demand_ok && monopoly_ratio_inputs,
                 monopoly ? std::string("needs S >= 2, B >= S and positive demand")
                          : r.monopoly_skip_reason,
                 [&] {
                   return Verdict::checked("thm66", *r.spe_sw_min * Rational(goods), ">=",
                                           monopoly->best_sw_in_gamma1);
                 });

  // Tightness checks only apply to the named constructions.
  const std::string& label = r.label;
  spe_quantified("thm63_tight",
                 label.starts_with("thm63(") && monopoly_ratio_inputs && r.ratio_max,
                 "only checked on thm63(S) instances", [&] {
                   return Verdict::checked("thm63_tight", *r.ratio_max, "==",
                                           Rational(sellers + 1, sellers));
                 });
  spe_quantified("thm65_tight",
                 label.starts_with("thm65(") && monopoly_ratio_inputs &&
                     monopoly->best_sw_in_gamma1 > Rational(0),
                 "only checked on thm65(S,G) instances", [&] {
                   return Verdict::checked("thm65_tight",
                                           *r.spe_sw_max / monopoly->best_sw_in_gamma1,
                                           "==", Rational(std::min(sellers, buyers), sellers));
                 });
  spe_quantified("thm66_tight", label.starts_with("ex51(") && r.ratio_min.has_value(),
                 "only checked on ex51(G) instances", [&] {
                   return Verdict::checked("thm66_tight", *r.ratio_min, "==",
                                           Rational(1, goods));
                 });

  return r;
}

namespace {

std::string quoted(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string fraction_or(const std::optional<Rational>& value, const char* fallback) {
  return value ? to_fraction_string(*value) : fallback;
}

}  // namespace

OutputFormat parse_output_format(const std::string& name) {
  if (name == "table") return OutputFormat::table;
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw InputError("unknown format '" + name + "', expected table, csv or json");
}

std::string report_csv_header() {
  return "label,S,B,G,p1,p2,c1,opt,monop_rev,monop_sw_worst,monop_sw_best,"
         "spe_count,spe_sw_min,spe_sw_max,ratio_max,ratio_min,verdicts";
}

std::string report_csv_row(const BoundReport& r) {
  std::string row = quoted(r.label);
  row += ',' + std::to_string(r.sellers);
  row += ',' + std::to_string(r.buyers);
  row += ',' + std::to_string(r.goods);
  row += ',' + std::to_string(r.dp.p1);
  row += ',' + std::to_string(r.dp.p2);
  row += ',' + std::to_string(r.dp.c1);
  row += ',' + fraction_or(r.opt, "skipped");
  if (r.monopoly) {
    row += ',' + to_fraction_string(r.monopoly->max_revenue);
    row += ',' + to_fraction_string(r.monopoly->worst_sw_in_gamma1);
    row += ',' + to_fraction_string(r.monopoly->best_sw_in_gamma1);
  } else {
    row += ",skipped,skipped,skipped";
  }
  if (r.spe_searched) {
    row += ',' + std::to_string(r.spe.size());
    row += ',' + fraction_or(r.spe_sw_min, "undefined");
    row += ',' + fraction_or(r.spe_sw_max, "undefined");
  } else {
    row += ",skipped,skipped,skipped";
  }
  row += ',' + fraction_or(r.ratio_max, "undefined");
  row += ',' + fraction_or(r.ratio_min, "undefined");
  row += ',';
  for (std::size_t i = 0; i < r.verdicts.size(); ++i) {
    if (i > 0) row += ';';
    row += r.verdicts[i].name + "=" + to_string(r.verdicts[i].status);
  }
  return row;
}

std::string report_table(const BoundReport& r) {
  std::ostringstream out;
  out << "instance: " << (r.label.empty() ? "(unlabelled)" : r.label) << "  [S=" << r.sellers
      << " B=" << r.buyers << " G=" << r.goods << "]\n";
  out << "demand: p1=" << r.dp.p1 << " p2=" << r.dp.p2 << " c1=" << r.dp.c1
      << " rho=" << fraction_or(r.rho, "undefined") << "\n";
  if (r.monopoly) {
    out << "monopoly (S=1): max revenue " << to_fraction_string(r.monopoly->max_revenue)
        << ", |Gamma1| " << r.monopoly->revenue_maximizers.size() << ", SW worst "
        << to_fraction_string(r.monopoly->worst_sw_in_gamma1) << " ("
        << r.monopoly->worst_witness.to_string() << "), best "
        << to_fraction_string(r.monopoly->best_sw_in_gamma1) << " ("
        << r.monopoly->best_witness.to_string() << "), opt "
        << to_fraction_string(r.monopoly->opt) << "\n";
  } else {
    out << "monopoly (S=1): skipped - " << r.monopoly_skip_reason << "\n";
  }
  out << "opt (S=" << r.sellers << "): " << fraction_or(r.opt, "skipped") << "\n";
  if (r.spe_searched) {
    out << "pure SPE found: " << r.spe.size() << "\n";
    constexpr std::size_t kShow = 32;
    for (std::size_t i = 0; i < r.spe.size() && i < kShow; ++i) {
      out << "  " << r.spe[i].profile.to_string() << "  SW="
          << to_fraction_string(r.spe[i].welfare) << "\n";
    }
    if (r.spe.size() > kShow) {
      out << "  ... (" << r.spe.size() - kShow << " more)\n";
    }
  } else {
    out << "pure SPE search: skipped - " << r.spe_skip_reason << "\n";
  }
  out << "ratio max " << fraction_or(r.ratio_max, "undefined")
      << " (vs worst Gamma1), min " << fraction_or(r.ratio_min, "undefined")
      << " (vs best Gamma1)\n";
  out << "verdicts:\n";
  for (const Verdict& v : r.verdicts) {
    out << "  " << v.name << "  " << to_string(v.status);
    if (v.lhs && v.rhs) {
      out << "  " << to_fraction_string(*v.lhs) << " " << v.relation << " "
          << to_fraction_string(*v.rhs);
      if (auto slack = v.slack()) out << "  (slack " << to_fraction_string(*slack) << ")";
    }
    if (!v.note.empty()) out << "  [" << v.note << "]";
    out << "\n";
  }
  return out.str();
}

nlohmann::json report_json(const BoundReport& r) {
  nlohmann::json doc;
  doc["label"] = r.label;
  doc["sellers"] = r.sellers;
  doc["buyers"] = r.buyers;
  doc["goods"] = r.goods;
  doc["demand"] = {{"p1", r.dp.p1}, {"p2", r.dp.p2}, {"c1", r.dp.c1}};
  doc["rho"] = r.rho ? nlohmann::json(to_fraction_string(*r.rho)) : nlohmann::json();
  if (r.monopoly) {
    doc["monopoly"] = {
        {"max_revenue", to_fraction_string(r.monopoly->max_revenue)},
        {"gamma1_count", r.monopoly->revenue_maximizers.size()},
        {"worst_sw", to_fraction_string(r.monopoly->worst_sw_in_gamma1)},
        {"worst_witness", r.monopoly->worst_witness.to_string()},
        {"best_sw", to_fraction_string(r.monopoly->best_sw_in_gamma1)},
        {"best_witness", r.monopoly->best_witness.to_string()},
        {"opt", to_fraction_string(r.monopoly->opt)},
    };
  } else {
    doc["monopoly"] = nlohmann::json();
    doc["monopoly_skip_reason"] = r.monopoly_skip_reason;
  }
  doc["opt"] = r.opt ? nlohmann::json(to_fraction_string(*r.opt)) : nlohmann::json();
  if (!r.opt) doc["opt_skip_reason"] = r.opt_skip_reason;
  nlohmann::json spe;
  spe["searched"] = r.spe_searched;
  if (r.spe_searched) {
    spe["count"] = r.spe.size();
    spe["sw_min"] = r.spe_sw_min ? nlohmann::json(to_fraction_string(*r.spe_sw_min))
                                 : nlohmann::json();
    spe["sw_max"] = r.spe_sw_max ? nlohmann::json(to_fraction_string(*r.spe_sw_max))
                                 : nlohmann::json();
    nlohmann::json entries = nlohmann::json::array();
    for (const SpeEntry& entry : r.spe) {
      entries.push_back({{"profile", entry.profile.to_string()},
                         {"sw", to_fraction_string(entry.welfare)}});
    }
    spe["entries"] = std::move(entries);
  } else {
    spe["skip_reason"] = r.spe_skip_reason;
  }
  doc["spe"] = std::move(spe);
  doc["ratio_max"] =
      r.ratio_max ? nlohmann::json(to_fraction_string(*r.ratio_max)) : nlohmann::json();
  doc["ratio_min"] =
      r.ratio_min ? nlohmann::json(to_fraction_string(*r.ratio_min)) : nlohmann::json();
  nlohmann::json verdicts = nlohmann::json::array();
  for (const Verdict& v : r.verdicts) {
    nlohmann::json item;
    item["name"] = v.name;
    item["status"] = to_string(v.status);
    if (v.lhs && v.rhs) {
      item["relation"] = v.relation;
      item["lhs"] = to_fraction_string(*v.lhs);
      item["rhs"] = to_fraction_string(*v.rhs);
      item["slack"] = to_fraction_string(*v.slack());
    }
    if (!v.note.empty()) item["note"] = v.note;
    verdicts.push_back(std::move(item));
  }
  doc["verdicts"] = std::move(verdicts);
  return doc;
}

namespace {

std::vector<Instance> build_sweep_tasks(const SweepConfig& config) {
  if (config.max_cells < 1 || config.max_cells > 24) {
    throw InputError("sweep cell bound must lie in 1..24");
  }
  if (config.sellers.empty()) throw InputError("sweep needs at least one seller count");
  for (int sellers : config.sellers) {
    if (sellers < 1) throw InputError("sweep seller counts must be positive");
  }
  if (config.random_count < 0 || config.random_max_buyers < 1 ||
      config.random_max_goods < 1) {
    throw InputError("bad random sweep configuration");
  }
  std::vector<Instance> tasks;
  for (int buyers = 1; buyers <= config.max_cells; ++buyers) {
    for (int goods = 1; buyers * goods <= config.max_cells; ++goods) {
      const int cells = buyers * goods;
      for (int sellers : config.sellers) {
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << cells); ++bits) {
          std::vector<std::uint8_t> values(cells);
          for (int i = 0; i < cells; ++i) values[i] = (bits >> i) & 1;
          std::string label = "exh-B" + std::to_string(buyers) + "-G" +
                              std::to_string(goods) + "-S" + std::to_string(sellers) +
                              "-m" + std::to_string(bits);
          tasks.push_back(Instance{sellers, ValuationMatrix(buyers, goods, std::move(values)),
                                   std::move(label), std::nullopt});
        }
      }
    }
  }
  std::mt19937_64 master(config.seed);
  const Rational densities[] = {Rational(1, 4), Rational(1, 2), Rational(3, 4)};
  for (int i = 0; i < config.random_count; ++i) {
    const int buyers = 1 + static_cast<int>(master() % config.random_max_buyers);
    const int goods = 1 + static_cast<int>(master() % config.random_max_goods);
    const int sellers = config.sellers[master() % config.sellers.size()];
    const Rational density = densities[master() % 3];
    const std::uint64_t seed = master();
    Instance instance = generate_random(buyers, goods, sellers, density, seed, false);
    instance.label = "rand-" + std::to_string(i) + "(B=" + std::to_string(buyers) +
                     ",G=" + std::to_string(goods) + ",S=" + std::to_string(sellers) +
                     ",density=" + to_fraction_string(density) +
                     ",seed=" + std::to_string(seed) + ")";
    tasks.push_back(std::move(instance));
  }
  return tasks;
}

}  // namespace

SweepOutcome run_sweep(const SweepConfig& config, std::ostream& out) {
  const std::vector<Instance> tasks = build_sweep_tasks(config);
  struct RowResult {
    std::string csv;
    std::int64_t passed = 0, failed = 0, skipped = 0;
  };
  std::vector<RowResult> rows(tasks.size());
  std::atomic<std::size_t> cursor{0};

  const auto worker = [&] {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= tasks.size()) return;
      BoundReport report = run_ratio_experiment(tasks[i], config.budgets);
      RowResult& row = rows[i];
      row.csv = report_csv_row(report);
      for (const Verdict& v : report.verdicts) {
        switch (v.status) {
          case Verdict::Status::pass: ++row.passed; break;
          case Verdict::Status::fail: ++row.failed; break;
          case Verdict::Status::skip: ++row.skipped; break;
        }
      }
    }
  };

  int jobs = config.jobs > 0 ? config.jobs
                             : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(jobs, 1);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  out << report_csv_header() << '\n';
  SweepOutcome outcome;
  outcome.instances = static_cast<std::int64_t>(tasks.size());
  for (const RowResult& row : rows) {
    out << row.csv << '\n';
    outcome.passed_verdicts += row.passed;
    outcome.failed_verdicts += row.failed;
    outcome.skipped_verdicts += row.skipped;
    if (row.failed > 0) ++outcome.failed_instances;
  }
  return outcome;
}

}  // namespace sigcomp
