// prospector: generate networks, run the accuracy study, and export case
// studies and error surfaces.
//
// Exit codes: 0 success, 1 runtime or numeric failure, 2 usage error.

#include "prospector/engine.hpp"
#include "prospector/entropy_oracle.hpp"
#include "prospector/errors.hpp"
#include "prospector/netgen.hpp"
#include "prospector/network_io.hpp"
#include "prospector/parallel.hpp"
#include "prospector/study.hpp"
#include "prospector/study_io.hpp"
#include "prospector/table_constraints.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace prospector;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StudyFlags {
  std::vector<std::string> networks;
  std::uint64_t seed = kDefaultStudySeed;
  std::size_t count = 400;
  std::vector<double> grid = default_grid();
  bool no_filter = false;
  bool literal_filter = false;
  std::string results;
  std::string report;
  unsigned workers = 0;
};

struct SelectionFlags {
  std::string networks;
  std::size_t index = 0;
  int case_study = 0;
};

void add_study_flags(CLI::App* cmd, StudyFlags& f) {
  cmd->add_option("--networks", f.networks, "Network files to evaluate (default: generate the study sample)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Seed for the generated sample (associated sample uses seed + 1)")
      ->capture_default_str();
  cmd->add_option("--count", f.count, "Networks per relation class when generating")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--grid", f.grid, "Evidence grid values, crossed for both pieces of evidence")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  auto* nf = cmd->add_flag("--no-filter", f.no_filter, "Evaluate every network regardless of monotonicity");
  cmd->add_flag("--literal-filter", f.literal_filter, "Only require monotonicity in E2 (two inequalities)")
      ->excludes(nf);
  cmd->add_option("--workers", f.workers, "Worker threads (default: PROSPECTOR_WORKERS or 1)");
}

void add_selection_flags(CLI::App* cmd, SelectionFlags& f) {
  auto* file = cmd->add_option("--networks", f.networks, "Network file")->check(CLI::ExistingFile);
  cmd->add_option("--index", f.index, "Position of the network in the file")->needs(file);
  auto* cs = cmd->add_option("--case-study", f.case_study, "Built-in network 1 or 2")
                 ->check(CLI::IsMember({1, 2}));
  file->excludes(cs);
}

JointTable select_network(const SelectionFlags& f) {
  if (f.case_study != 0) return case_study(f.case_study);
  if (f.networks.empty()) throw UsageError("select a network with --networks or --case-study");
  const auto networks = load_networks(f.networks);
  if (f.index >= networks.size()) {
    throw UsageError("--index " + std::to_string(f.index) + " out of range (file holds " +
                     std::to_string(networks.size()) + " networks)");
  }
  return networks[f.index];
}

StudyReport run_study_command(const StudyFlags& f) {
  EvaluationOptions options;
  options.grid = f.grid;
  options.filter = f.no_filter ? FilterMode::Off : f.literal_filter ? FilterMode::Literal : FilterMode::Full;
  options.workers = f.workers > 0 ? f.workers : default_worker_count();
  if (options.grid.empty()) throw UsageError("--grid must list at least one value");

  if (f.networks.empty()) {
    StudyConfig config = StudyConfig::from_seed(f.seed, f.count);
    config.evaluation = options;
    return run_study(config);
  }

  std::vector<JointTable> networks;
  for (const auto& path : f.networks) {
    std::vector<JointTable> loaded;
    try {
      loaded = load_networks(path);
    } catch (const InvalidArgument& e) {
      throw UsageError(path + ": " + e.what());
    }
    networks.insert(networks.end(), loaded.begin(), loaded.end());
  }
  if (networks.empty()) throw UsageError("network input is empty");
  return evaluate_networks(networks, options);
}

void print_stats(std::ostream& out, const std::string& label, const RuleErrorStats& s) {
  out << label << ": average signed " << s.average_signed << ", average absolute "
      << s.average_absolute << ", maximum absolute " << s.maximum_absolute << '\n';
}

int run_case_study(int id, const std::string& out_path, double step) {
  const JointTable table = case_study(id);
  const auto rates = base_rates(table);
  const auto q = conditional_profile(table);
  const auto view = network_view(table);

  std::cout << std::setprecision(6);
  std::cout << "case study " << id << "\n";
  std::cout << "cells (ff~c ffc ft~c ftc tf~c tfc tt~c ttc):";
  for (int i = 0; i < 8; ++i) std::cout << ' ' << table[i];
  std::cout << "\nbase rates: P(E1) " << rates.p_e1 << ", P(E2) " << rates.p_e2 << ", P(C) "
            << rates.p_c << '\n';
  std::cout << "P(C|E1) " << view.p_c_given_e[0] << ", P(C|E2) " << view.p_c_given_e[1] << '\n';
  std::cout << "conditional profile P(C|e1,e2) ff " << q.q_ff << ", ft " << q.q_ft << ", tf "
            << q.q_tf << ", tt " << q.q_tt << '\n';

  const auto grid = default_grid();
  const auto updates = grid_updates(grid);
  print_stats(std::cout, "independent rule, default grid", rule_error_stats(table, RuleSet::Independent, updates));
  const auto points = lattice(0.2);
  const auto lattice_updates = grid_updates(points);
  print_stats(std::cout, "independent rule, 0.2-step lattice",
              rule_error_stats(table, RuleSet::Independent, lattice_updates));

  const auto surface = error_surface(table, RuleSet::Independent, step);
  double worst = 0.0;
  for (const auto& p : surface) worst = std::max(worst, std::abs(p.signed_error));
  std::cout << "surface step " << step << ": " << surface.size() << " points, maximum |error| "
            << worst << '\n';
  save_surface(out_path, surface);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PROSPECTOR accuracy study: network generation, cross-entropy oracle, error analysis"};
  app.require_subcommand(1, 1);

  // generate
  std::string gen_kind;
  std::size_t gen_count = 400;
  std::uint64_t gen_seed = kDefaultStudySeed;
  std::string gen_out;
  unsigned gen_workers = 0;
  auto* generate_cmd = app.add_subcommand("generate", "Generate random networks");
  generate_cmd->add_option("--kind", gen_kind, "independent or associated")
      ->required()
      ->check(CLI::IsMember({"independent", "associated"}));
  generate_cmd->add_option("--count", gen_count, "Number of networks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  generate_cmd->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  generate_cmd->add_option("--out", gen_out, "Output network file")->required();
  generate_cmd->add_option("--workers", gen_workers, "Worker threads");

  // evaluate / report
  StudyFlags eval_flags;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate networks over the evidence grid");
  add_study_flags(evaluate_cmd, eval_flags);
  evaluate_cmd->add_option("--results", eval_flags.results, "Per-update results CSV")->required();
  evaluate_cmd->add_option("--report", eval_flags.report, "Study report file");

  StudyFlags report_flags;
  auto* report_cmd = app.add_subcommand("report", "Run the study and write the rule-set comparison report");
  add_study_flags(report_cmd, report_flags);
  report_cmd->add_option("--report", report_flags.report, "Study report file")->required();
  report_cmd->add_option("--results", report_flags.results, "Per-update results CSV");

  // case-study
  int cs_id = 0;
  std::string cs_out;
  double cs_step = 0.05;
  auto* case_cmd = app.add_subcommand("case-study", "Reproduce a built-in case study");
  case_cmd->add_option("--id", cs_id, "1 or 2")->required()->check(CLI::IsMember({1, 2}));
  case_cmd->add_option("--out", cs_out, "Error surface CSV")->required();
  case_cmd->add_option("--step", cs_step, "Surface lattice step")
      ->check(CLI::Range(1e-6, 0.5))
      ->capture_default_str();

  // surface
  SelectionFlags surf_sel;
  std::string surf_rule = "independent";
  double surf_step = 0.05;
  std::string surf_out;
  auto* surface_cmd = app.add_subcommand("surface", "Write the signed error surface of one network");
  add_selection_flags(surface_cmd, surf_sel);
  surface_cmd->add_option("--rule", surf_rule, "conjunctive, disjunctive or independent")
      ->check(CLI::IsMember({"conjunctive", "disjunctive", "independent"}))
      ->capture_default_str();
  surface_cmd->add_option("--step", surf_step, "Lattice step")
      ->check(CLI::Range(1e-6, 0.5))
      ->capture_default_str();
  surface_cmd->add_option("--out", surf_out, "Surface CSV")->required();

  // oracle
  SelectionFlags oracle_sel;
  double oracle_e1 = 0.0;
  double oracle_e2 = 0.0;
  auto* oracle_cmd = app.add_subcommand("oracle", "Minimum cross-entropy posterior for one update");
  add_selection_flags(oracle_cmd, oracle_sel);
  oracle_cmd->add_option("--e1", oracle_e1, "New P(E1)")->required()->check(CLI::Range(0.0, 1.0));
  oracle_cmd->add_option("--e2", oracle_e2, "New P(E2)")->required()->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate_cmd) {
      GenerationConfig config;
      config.kind = parse_relation(gen_kind);
      config.count = gen_count;
      config.seed = gen_seed;
      config.workers = gen_workers > 0 ? gen_workers : default_worker_count();
      const auto networks = generate(config);
      save_networks(gen_out, networks);
      std::cout << "wrote " << networks.size() << ' ' << gen_kind << " networks to " << gen_out << '\n';
      return kExitOk;
    }
    if (*evaluate_cmd || *report_cmd) {
      const StudyFlags& flags = *evaluate_cmd ? eval_flags : report_flags;
      const auto report = run_study_command(flags);
      if (!flags.results.empty()) save_results(flags.results, report);
      if (!flags.report.empty()) save_report(flags.report, report);
      print_table1(std::cout, report);
      return kExitOk;
    }
    if (*case_cmd) return run_case_study(cs_id, cs_out, cs_step);
    if (*surface_cmd) {
      const auto table = select_network(surf_sel);
      const auto surface = error_surface(table, parse_rule_set(surf_rule), surf_step);
      save_surface(surf_out, surface);
      std::cout << "wrote " << surface.size() << " surface points to " << surf_out << '\n';
      return kExitOk;
    }
    if (*oracle_cmd) {
      const auto table = select_network(oracle_sel);
      std::cout << std::setprecision(6) << correct_posterior(table, {oracle_e1, oracle_e2}) << '\n';
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Infeasible& e) {
    std::cerr << "infeasible update: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
