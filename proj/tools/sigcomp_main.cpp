// Command line front end: instance I/O, subgame solving, SPE search and
// certificate checking, monopoly analysis and the theorem sweep.
//
// Exit codes: 0 all checks pass, 1 some verdict failed, 2 input error,
// 3 search budget exceeded.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sigcomp/equilibrium.hpp"
#include "sigcomp/errors.hpp"
#include "sigcomp/instance.hpp"
#include "sigcomp/monopoly.hpp"
#include "sigcomp/report.hpp"

namespace {

using namespace sigcomp;

constexpr int kExitPass = 0;
constexpr int kExitVerdictFail = 1;
constexpr int kExitInputError = 2;
constexpr int kExitBudget = 3;

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

Instance load_instance(const std::string& path) { return parse_instance(read_text(path)); }

struct GlobalOptions {
  std::string format = "table";
  std::int64_t budget_profiles = Budgets{}.max_profiles;
  std::int64_t budget_assignments = Budgets{}.max_assignments;

  Budgets budgets() const { return Budgets{budget_profiles, budget_assignments}; }
  OutputFormat output_format() const { return parse_output_format(format); }
};

void print_utilities(std::ostream& out, const Instance& instance,
                     const SellerProfile& profile, const BuyerAssignment& assignment) {
  const ValuationMatrix& v = instance.valuation;
  out << "assignment: " << assignment.to_string() << "\n";
  out << "social welfare: " << to_fraction_string(social_welfare(v, profile, assignment))
      << "\n";
  for (int b = 0; b < v.num_buyers(); ++b) {
    out << "  u_buyer[" << b
        << "] = " << to_fraction_string(buyer_utility(v, profile, assignment, b)) << "\n";
  }
  for (int s = 0; s < profile.num_sellers(); ++s) {
    out << "  u_seller[" << s
        << "] = " << to_fraction_string(seller_utility(v, profile, assignment, s)) << "\n";
  }
}

int cmd_solve_subgame(const GlobalOptions& global, const std::string& path,
                      const std::vector<std::string>& partitions,
                      const std::string& start_text) {
  Instance instance = load_instance(path);
  const ValuationMatrix& v = instance.valuation;
  if (static_cast<int>(partitions.size()) != instance.sellers) {
    throw InputError("need exactly one --partition per seller (" +
                     std::to_string(instance.sellers) + ")");
  }
  SellerProfile profile;
  for (const std::string& text : partitions) {
    profile.partitions.push_back(Partition::parse(text, v.num_goods()));
  }
  BuyerAssignment start;
  start.choice.assign(v.num_buyers(), 0);
  if (!start_text.empty()) {
    start.choice.clear();
    std::stringstream stream(start_text);
    std::string token;
    while (std::getline(stream, token, ',')) {
      start.choice.push_back(static_cast<std::uint8_t>(std::stoi(token)));
    }
  }
  SubgameResult result = best_response_dynamics(v, profile, start);
  if (global.output_format() == OutputFormat::json) {
    nlohmann::json doc;
    doc["profile"] = profile.to_string();
    doc["assignment"] = result.assignment.to_string();
    doc["steps"] = result.steps;
    doc["is_nash"] = result.is_nash;
    doc["potential"] = to_fraction_string(result.potential);
    doc["social_welfare"] =
        to_fraction_string(social_welfare(v, profile, result.assignment));
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "profile: " << profile.to_string() << "\n";
    std::cout << "converged after " << result.steps << " improvement steps\n";
    std::cout << "nash: " << (result.is_nash ? "yes" : "no")
              << ", potential: " << to_fraction_string(result.potential) << "\n";
    print_utilities(std::cout, instance, profile, result.assignment);
  }
  return kExitPass;
}

int cmd_find_spe(const GlobalOptions& global, const std::string& path,
                 const std::string& cert_dir, int max_certs) {
  Instance instance = load_instance(path);
  std::vector<SpeSummary> found =
      find_pure_spe_profiles(instance.valuation, instance.sellers, global.budgets());
  if (global.output_format() == OutputFormat::json) {
    nlohmann::json doc;
    doc["count"] = found.size();
    nlohmann::json list = nlohmann::json::array();
    for (const SpeSummary& spe : found) {
      list.push_back({{"profile", spe.profile.to_string()},
                      {"sw", to_fraction_string(spe.welfare)}});
    }
    doc["spe"] = std::move(list);
    std::cout << doc.dump(2) << "\n";
  } else if (global.output_format() == OutputFormat::csv) {
    std::cout << "profile,sw\n";
    for (const SpeSummary& spe : found) {
      std::cout << "\"" << spe.profile.to_string() << "\","
                << to_fraction_string(spe.welfare) << "\n";
    }
  } else {
    std::cout << "pure-seller SPE found: " << found.size() << "\n";
    for (const SpeSummary& spe : found) {
      std::cout << "  " << spe.profile.to_string()
                << "  SW=" << to_fraction_string(spe.welfare) << "\n";
    }
    if (found.empty()) {
      std::cout << "(existence is only guaranteed when sellers may mix; none of the "
                   "pure profiles is stable here)\n";
    }
  }
  if (!cert_dir.empty()) {
    std::filesystem::create_directories(cert_dir);
    const int count = std::min<int>(max_certs, static_cast<int>(found.size()));
    for (int i = 0; i < count; ++i) {
      SpeCertificate cert =
          build_spe_certificate(instance.valuation, found[i].profile, global.budgets());
      std::string file = cert_dir + "/spe-" + std::to_string(i) + ".json";
      write_text(file, certificate_to_json(cert, instance).dump(2) + "\n");
      std::cerr << "wrote " << file << "\n";
    }
  }
  return kExitPass;
}

int cmd_verify_cert(const GlobalOptions& global, const std::string& path,
                    const std::string& cert_path) {
  Instance instance = load_instance(path);
  nlohmann::json doc = nlohmann::json::parse(read_text(cert_path), nullptr,
                                             /*allow_exceptions=*/true);
  SpeCertificate cert = certificate_from_json(doc, instance);
  CertificateCheck check = verify_spe_certificate(instance.valuation, cert, global.budgets());
  if (global.output_format() == OutputFormat::json) {
    nlohmann::json result;
    result["pass"] = check.pass;
    nlohmann::json violations = nlohmann::json::array();
    for (const CertViolation& violation : check.violations) {
      violations.push_back(violation.describe());
    }
    result["violations"] = std::move(violations);
    std::cout << result.dump(2) << "\n";
  } else {
    std::cout << (check.pass ? "PASS" : "FAIL") << ": certificate for profile "
              << cert.on_path.to_string() << "\n";
    for (const CertViolation& violation : check.violations) {
      std::cout << "  " << violation.describe() << "\n";
    }
  }
  return check.pass ? kExitPass : kExitVerdictFail;
}

int cmd_monopoly(const GlobalOptions& global, const std::string& path) {
  Instance instance = load_instance(path);
  const ValuationMatrix& v = instance.valuation;
  MonopolyAnalysis analysis = analyze_monopoly(v, global.budgets());
  DemandProfile dp = demand_profile(v);
  BoundVerdicts verdicts = check_monopoly_bounds(analysis, dp, v.num_goods());

  SellerProfile profile;
  profile.partitions.resize(1);
  BuyerAssignment everyone;
  everyone.choice.assign(v.num_buyers(), 0);

  const auto row_of = [&](const Partition& p) {
    profile.partitions[0] = p;
    Rational revenue = seller_utility(v, profile, everyone, 0);
    Rational sw = social_welfare(v, profile, everyone);
    bool in_gamma1 = revenue == analysis.max_revenue;
    bool in_gamma1_prime = in_gamma1 && sw == analysis.best_sw_in_gamma1;
    return std::tuple(revenue, sw, in_gamma1, in_gamma1_prime);
  };

  if (global.output_format() == OutputFormat::csv) {
    std::cout << "partition,revenue,sw,in_gamma1,in_gamma1_prime\n";
    for_each_partition(v.num_goods(), [&](const Partition& p) {
      auto [revenue, sw, g1, g1p] = row_of(p);
      std::cout << "\"" << p.to_string() << "\"," << to_fraction_string(revenue) << ","
                << to_fraction_string(sw) << "," << (g1 ? 1 : 0) << "," << (g1p ? 1 : 0)
                << "\n";
    }, {.max_goods = Partition::kMaxGoods});
  } else if (global.output_format() == OutputFormat::json) {
    nlohmann::json doc;
    doc["max_revenue"] = to_fraction_string(analysis.max_revenue);
    doc["opt"] = to_fraction_string(analysis.opt);
    doc["worst_sw_in_gamma1"] = to_fraction_string(analysis.worst_sw_in_gamma1);
    doc["worst_witness"] = analysis.worst_witness.to_string();
    doc["best_sw_in_gamma1"] = to_fraction_string(analysis.best_sw_in_gamma1);
    doc["best_witness"] = analysis.best_witness.to_string();
    nlohmann::json rows = nlohmann::json::array();
    for_each_partition(v.num_goods(), [&](const Partition& p) {
      auto [revenue, sw, g1, g1p] = row_of(p);
      rows.push_back({{"partition", p.to_string()},
                      {"revenue", to_fraction_string(revenue)},
                      {"sw", to_fraction_string(sw)},
                      {"in_gamma1", g1},
                      {"in_gamma1_prime", g1p}});
    }, {.max_goods = Partition::kMaxGoods});
    doc["partitions"] = std::move(rows);
    nlohmann::json verdict_list = nlohmann::json::array();
    for (const Verdict& verdict : verdicts.items) {
      verdict_list.push_back({{"name", verdict.name},
                              {"status", to_string(verdict.status)}});
    }
    doc["verdicts"] = std::move(verdict_list);
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "partition scan over Bell(" << v.num_goods()
              << ") = " << bell_number(v.num_goods()) << " partitions\n";
    for_each_partition(v.num_goods(), [&](const Partition& p) {
      auto [revenue, sw, g1, g1p] = row_of(p);
      std::cout << "  " << p.to_string() << "  revenue=" << to_fraction_string(revenue)
                << " sw=" << to_fraction_string(sw) << (g1 ? "  [Gamma1]" : "")
                << (g1p ? " [Gamma1']" : "") << "\n";
    }, {.max_goods = Partition::kMaxGoods});
    std::cout << "max revenue: " << to_fraction_string(analysis.max_revenue) << ", opt: "
              << to_fraction_string(analysis.opt) << "\n";
    std::cout << "SW across Gamma1: worst " << to_fraction_string(analysis.worst_sw_in_gamma1)
              << " (" << analysis.worst_witness.to_string() << "), best "
              << to_fraction_string(analysis.best_sw_in_gamma1) << " ("
              << analysis.best_witness.to_string() << ")\n";
    for (const Verdict& verdict : verdicts.items) {
      std::cout << "  " << verdict.name << "  " << to_string(verdict.status) << "\n";
    }
  }
  return verdicts.all_pass() ? kExitPass : kExitVerdictFail;
}

int cmd_ratio(const GlobalOptions& global, const std::string& path) {
  Instance instance = load_instance(path);
  BoundReport report = run_ratio_experiment(instance, global.budgets());
  switch (global.output_format()) {
    case OutputFormat::csv:
      std::cout << report_csv_header() << "\n" << report_csv_row(report) << "\n";
      break;
    case OutputFormat::json:
      std::cout << report_json(report).dump(2) << "\n";
      break;
    default:
      std::cout << report_table(report);
  }
  return report.all_verdicts_pass() ? kExitPass : kExitVerdictFail;
}

int cmd_sweep(const GlobalOptions& global, const SweepConfig& base, const std::string& out_path) {
  SweepConfig config = base;
  config.budgets = global.budgets();
  SweepOutcome outcome;
  if (out_path.empty() || out_path == "-") {
    outcome = run_sweep(config, std::cout);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + out_path + "'");
    outcome = run_sweep(config, out);
  }
  std::cerr << "sweep: " << outcome.instances << " instances, " << outcome.passed_verdicts
            << " verdicts passed, " << outcome.failed_verdicts << " failed, "
            << outcome.skipped_verdicts << " skipped\n";
  return outcome.failed_verdicts == 0 ? kExitPass : kExitVerdictFail;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"exact solver and bound checker for partition-signalling auction competition"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--format", global.format, "output format: table, csv or json")
      ->default_val("table");
  app.add_option("--budget-profiles", global.budget_profiles,
                 "cap on enumerated seller profiles (Bell(G)^S)")
      ->default_val(Budgets{}.max_profiles);
  app.add_option("--budget-assignments", global.budget_assignments,
                 "cap on enumerated buyer assignments (S^B)")
      ->default_val(Budgets{}.max_assignments);

  // named
  auto* named = app.add_subcommand("named", "emit a named instance document");
  std::string named_name, named_out;
  named->add_option("name", named_name,
                    "ex41 | ex51(G) | thm43-identity(G) | thm44-2x2 | thm63(S) | thm65(S,G)")
      ->required();
  named->add_option("-o,--out", named_out, "output file (default stdout)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a seeded random instance");
  int gen_buyers = 0, gen_goods = 0, gen_sellers = 2;
  std::string gen_density = "1/2", gen_label, gen_out;
  std::uint64_t gen_seed = 1;
  bool gen_positive = false;
  gen->add_option("-b,--buyers", gen_buyers, "number of buyers")->required();
  gen->add_option("-g,--goods", gen_goods, "number of goods")->required();
  gen->add_option("-s,--sellers", gen_sellers, "number of sellers")->default_val(2);
  gen->add_option("--density", gen_density, "entry probability, e.g. 1/2 or 0.25")
      ->default_val("1/2");
  gen->add_option("--seed", gen_seed, "RNG seed")->default_val(1);
  gen->add_flag("--positive-demand", gen_positive,
                "redraw all-zero rows, then force one entry to 1");
  gen->add_option("--label", gen_label, "label stored in the document");
  gen->add_option("-o,--out", gen_out, "output file (default stdout)");

  // solve-subgame
  auto* solve = app.add_subcommand("solve-subgame",
                                   "run best-response dynamics for a fixed seller profile");
  std::string solve_path, solve_start;
  std::vector<std::string> solve_partitions;
  solve->add_option("instance", solve_path, "instance file ('-' for stdin)")->required();
  solve->add_option("--partition", solve_partitions,
                    "partition text form, one per seller (e.g. \"0,1|2\")")
      ->required();
  solve->add_option("--start", solve_start, "starting assignment, e.g. 0,0,1 (default all 0)");

  // find-spe
  auto* find = app.add_subcommand("find-spe", "search all pure seller profiles for SPE");
  std::string find_path, find_cert_dir;
  int find_max_certs = 16;
  find->add_option("instance", find_path, "instance file")->required();
  find->add_option("--cert-dir", find_cert_dir, "write certificates into this directory");
  find->add_option("--max-certs", find_max_certs, "certificates to materialize")
      ->default_val(16);

  // verify-cert
  auto* verify = app.add_subcommand("verify-cert", "check an SPE certificate document");
  std::string verify_path, verify_cert;
  verify->add_option("instance", verify_path, "instance file")->required();
  verify->add_option("certificate", verify_cert, "certificate JSON file")->required();

  // monopoly
  auto* monopoly = app.add_subcommand("monopoly", "exhaustive single-seller analysis");
  std::string monopoly_path;
  monopoly->add_option("instance", monopoly_path, "instance file")->required();

  // opt
  auto* opt = app.add_subcommand("opt", "maximal social welfare under full disclosure");
  std::string opt_path;
  opt->add_option("instance", opt_path, "instance file")->required();

  // ratio
  auto* ratio = app.add_subcommand("ratio", "full bound report for one instance");
  std::string ratio_path;
  ratio->add_option("instance", ratio_path, "instance file")->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "theorem sweep over exhaustive + random instances");
  SweepConfig sweep_config;
  std::string sweep_out;
  sweep->add_option("--cells", sweep_config.max_cells, "exhaustive part covers B*G <= cells")
      ->default_val(12);
  sweep->add_option("--sellers", sweep_config.sellers, "seller counts to sweep")
      ->delimiter(',')
      ->default_val(std::vector<int>{2, 3});
  sweep->add_option("--random", sweep_config.random_count, "number of random instances")
      ->default_val(500);
  sweep->add_option("--max-buyers", sweep_config.random_max_buyers,
                    "buyer cap for random instances")
      ->default_val(6);
  sweep->add_option("--max-goods", sweep_config.random_max_goods,
                    "good cap for random instances")
      ->default_val(6);
  sweep->add_option("--seed", sweep_config.seed, "master seed for the random part")
      ->default_val(12345);
  sweep->add_option("--jobs", sweep_config.jobs, "worker threads (0 = all cores)")
      ->default_val(0);
  sweep->add_option("--out", sweep_out, "CSV output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (named->parsed()) {
    write_text(named_out, emit_instance(named_instance(named_name)));
    return kExitPass;
  }
  if (gen->parsed()) {
    Instance instance = generate_random(gen_buyers, gen_goods, gen_sellers,
                                        parse_fraction(gen_density), gen_seed, gen_positive);
    if (!gen_label.empty()) instance.label = gen_label;
    write_text(gen_out, emit_instance(instance));
    return kExitPass;
  }
  if (solve->parsed()) return cmd_solve_subgame(global, solve_path, solve_partitions, solve_start);
  if (find->parsed()) return cmd_find_spe(global, find_path, find_cert_dir, find_max_certs);
  if (verify->parsed()) return cmd_verify_cert(global, verify_path, verify_cert);
  if (monopoly->parsed()) return cmd_monopoly(global, monopoly_path);
  if (opt->parsed()) {
    Instance instance = load_instance(opt_path);
    Rational value = compute_opt(instance.valuation, instance.sellers, global.budgets());
    std::cout << to_fraction_string(value) << "\n";
    return kExitPass;
  }
  if (ratio->parsed()) return cmd_ratio(global, ratio_path);
  if (sweep->parsed()) return cmd_sweep(global, sweep_config, sweep_out);
  return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
