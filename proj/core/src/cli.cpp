#include "peersel/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <sstream>

#include "peersel/experiments.hpp"
#include "peersel/io.hpp"
#include "peersel/mechanisms.hpp"

namespace peersel::cli {

namespace {

struct CliFailure {
  int code;
  std::string message;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliFailure{kExitParse, "cannot open '" + path + "'"};
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CliFailure{kExitValidation, "cannot write '" + path + "'"};
  return out;
}

Rat parse_decimal_or_fail(const std::string& text, const char* what) {
  try {
    return parse_decimal(text);
  } catch (const std::invalid_argument& error) {
    throw CliFailure{kExitParse, std::string("bad ") + what + ": " + error.what()};
  }
}

struct SelectOptions {
  std::string mechanism;
  int k = 0;
  std::string profile_path;
  std::string clusters_path;
  std::string assignment_path;
  std::uint64_t seed = 0;
  bool probabilities = false;
  bool strict = false;
};

bool fatal_in_lenient_mode(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kReviewDegree:
    case ViolationKind::kReviewedDegree:
    case ViolationKind::kClusterBalance:
      return false;  // reported as warnings; uneven hand-made instances run
    default:
      return true;
  }
}

int run_select(const SelectOptions& options, std::ostream& out, std::ostream& err) {
  auto mechanism = parse_mechanism(options.mechanism);
  if (!mechanism) {
    throw CliFailure{kExitValidation, "unknown mechanism '" + options.mechanism + "'"};
  }
  if (options.probabilities && *mechanism != Mechanism::kExactDollarPartition) {
    throw CliFailure{kExitValidation, "--probabilities is only available for edp"};
  }

  ReviewProfile profile;
  {
    auto in = open_input(options.profile_path);
    profile = read_profile_csv(in);
  }
  ReviewAssignment assignment;
  if (!options.assignment_path.empty()) {
    auto in = open_input(options.assignment_path);
    assignment = read_assignment_csv(in);
    if (assignment.n() < profile.n) assignment.reviews.resize(profile.n);
  } else {
    assignment = assignment_from_profile(profile);
  }

  Clustering clustering;
  const bool needs_clusters = mechanism_needs_clustering(*mechanism);
  if (!options.clusters_path.empty()) {
    auto in = open_input(options.clusters_path);
    clustering = read_clustering_csv(in);
    if (clustering.n() != profile.n) {
      throw CliFailure{kExitValidation, "clustering and profile disagree on the agent count"};
    }
  } else if (needs_clusters) {
    throw CliFailure{kExitValidation,
                     "mechanism '" + options.mechanism + "' needs --clusters"};
  } else {
    clustering.ell = 1;
    clustering.assignment.assign(profile.n, 0);
  }

  auto report = validate_instance(profile, clustering, assignment, options.k, options.strict);
  bool fatal = false;
  for (const auto& violation : report.violations) {
    // Without a real clustering, in-cluster findings are artifacts of the
    // single-cluster placeholder.
    if (!needs_clusters && options.clusters_path.empty() &&
        (violation.kind == ViolationKind::kInClusterReview ||
         violation.kind == ViolationKind::kClusterBalance)) {
      continue;
    }
    if (options.strict || fatal_in_lenient_mode(violation.kind)) fatal = true;
    err << "validation: " << violation.detail << "\n";
  }
  if (fatal) return kExitValidation;

  try {
    if (options.probabilities) {
      auto probabilities =
          edp_selection_probabilities(profile, clustering, assignment, options.k);
      for (AgentId agent = 0; agent < profile.n; ++agent) {
        out << agent << ',' << format_fraction(probabilities[agent]) << "\n";
      }
    } else {
      auto outcome = run_mechanism(*mechanism, profile, clustering, assignment, options.k,
                                   Seed{options.seed});
      for (AgentId winner : outcome.winners) out << winner << "\n";
    }
  } catch (const std::exception& error) {
    throw CliFailure{kExitValidation, error.what()};
  }
  return kExitOk;
}

struct ApportionOptions {
  std::string shares;
  bool distribution = false;
  bool sample = false;
  bool trace = false;
  std::uint64_t seed = 0;
};

void print_allocation(std::ostream& out, const NiceAllocation& allocation) {
  for (std::size_t i = 0; i < allocation.quotas.size(); ++i) {
    if (i) out << ' ';
    out << allocation.quotas[i];
  }
}

int run_apportion(const ApportionOptions& options, std::ostream& out, std::ostream& err) {
  (void)err;
  std::vector<Rat> shares;
  try {
    shares = parse_decimal_list(options.shares);
  } catch (const std::invalid_argument& error) {
    throw CliFailure{kExitParse, error.what()};
  }
  Rat total(0);
  for (const auto& share : shares) total += share;
  if (!rat_is_integer(total) || total < 0) {
    throw CliFailure{kExitValidation,
                     "shares sum to " + format_fraction(total) + ", expected an integer k"};
  }
  ShareVector quota;
  quota.shares = std::move(shares);
  quota.k = static_cast<int>(total.get_num().get_si());

  ApportionTrace trace;
  AllocationDistribution dist;
  try {
    dist = allocation_from_shares(quota, options.trace ? &trace : nullptr);
  } catch (const std::invalid_argument& error) {
    throw CliFailure{kExitValidation, error.what()};
  }

  if (options.trace) {
    for (const auto& step : trace.steps) {
      out << "allocation ";
      print_allocation(out, step.allocation);
      out << " prob " << format_fraction(step.prob) << " low=" << step.low
          << " high=" << step.high << " alpha=" << step.alpha
          << " pbar=" << format_fraction(step.pbar) << "\n";
    }
  }
  if (options.distribution) {
    for (const auto& [allocation, prob] : dist.support) {
      print_allocation(out, allocation);
      out << '\t' << format_fraction(prob) << "\n";
    }
  }
  if (options.sample) {
    print_allocation(out, sample_allocation(dist, Seed{options.seed}));
    out << "\n";
  }
  return kExitOk;
}

struct GenOptions {
  int n = 0;
  int m = 0;
  int ell = 0;
  std::string phi = "0.5";
  std::uint64_t seed = 0;
  std::string out_prefix;
};

int run_gen(const GenOptions& options, std::ostream& out, std::ostream& err) {
  (void)out;
  (void)err;
  Rat phi = parse_decimal_or_fail(options.phi, "phi");
  Instance instance;
  try {
    instance = generate_instance(options.n, options.m, options.ell, MallowsParams{phi},
                                 Seed{options.seed});
  } catch (const std::invalid_argument& error) {
    throw CliFailure{kExitValidation, error.what()};
  }
  {
    auto file = open_output(options.out_prefix + ".profile.csv");
    write_profile_csv(file, instance.profile);
  }
  {
    auto file = open_output(options.out_prefix + ".clusters.csv");
    write_clustering_csv(file, instance.clustering);
  }
  {
    auto file = open_output(options.out_prefix + ".assignment.csv");
    write_assignment_csv(file, instance.assignment);
  }
  {
    auto file = open_output(options.out_prefix + ".groundtruth.txt");
    write_ground_truth(file, instance.ground_truth);
  }
  return kExitOk;
}

struct SimulateOptions {
  int n = 130;
  std::string k_list;
  std::string m_list;
  std::string ell_list;
  std::string phi_list = "0.5";
  int trials = 1;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out_prefix;
};

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> values;
  std::stringstream stream(text);
  std::string piece;
  while (std::getline(stream, piece, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stoi(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw CliFailure{kExitParse, std::string("bad ") + what + ": '" + piece + "'"};
    }
  }
  if (values.empty()) throw CliFailure{kExitParse, std::string("empty ") + what};
  return values;
}

int run_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
  (void)out;
  SweepGrid grid;
  grid.n = options.n;
  grid.trials = options.trials;
  grid.master_seed = options.seed;
  grid.ks = parse_int_list(options.k_list, "k list");
  grid.ms = parse_int_list(options.m_list, "m list");
  grid.ells = parse_int_list(options.ell_list, "ell list");
  std::stringstream phis(options.phi_list);
  std::string piece;
  while (std::getline(phis, piece, ',')) {
    grid.phis.push_back(parse_decimal_or_fail(piece, "phi"));
  }

  SweepResult result;
  try {
    result = run_sweep(grid, options.threads);
  } catch (const std::invalid_argument& error) {
    throw CliFailure{kExitValidation, error.what()};
  }
  for (const auto& cell : result.skipped) {
    err << "skipped infeasible cell k=" << cell.k << " m=" << cell.m << " ell=" << cell.ell
        << " phi=" << format_decimal(cell.phi, 6) << "\n";
  }
  {
    auto file = open_output(options.out_prefix + ".records.csv");
    write_records_csv(file, result);
  }
  {
    auto file = open_output(options.out_prefix + ".summary.csv");
    write_summary_csv(file, result);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"peer selection toolkit"};
  app.require_subcommand(1);

  SelectOptions select;
  auto* select_cmd = app.add_subcommand("select", "run a selection mechanism on profile files");
  select_cmd->add_option("--mechanism", select.mechanism)->required();
  select_cmd->add_option("--k", select.k)->required();
  select_cmd->add_option("--profile", select.profile_path)->required();
  select_cmd->add_option("--clusters", select.clusters_path);
  select_cmd->add_option("--assignment", select.assignment_path);
  select_cmd->add_option("--seed", select.seed);
  select_cmd->add_flag("--probabilities", select.probabilities);
  select_cmd->add_flag("--strict", select.strict);

  ApportionOptions apportion;
  auto* apportion_cmd =
      app.add_subcommand("apportion", "lottery over integer allocations from fractional shares");
  apportion_cmd->add_option("--shares", apportion.shares)->required();
  apportion_cmd->add_flag("--distribution", apportion.distribution);
  apportion_cmd->add_flag("--sample", apportion.sample);
  apportion_cmd->add_flag("--trace", apportion.trace);
  apportion_cmd->add_option("--seed", apportion.seed);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic review instance");
  gen_cmd->add_option("--n", gen.n)->required();
  gen_cmd->add_option("--m", gen.m)->required();
  gen_cmd->add_option("--ell", gen.ell)->required();
  gen_cmd->add_option("--phi", gen.phi);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--out-prefix", gen.out_prefix)->required();

  SimulateOptions simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "run a seeded mechanism comparison sweep");
  simulate_cmd->add_option("--n", simulate.n);
  simulate_cmd->add_option("--k-list", simulate.k_list)->required();
  simulate_cmd->add_option("--m-list", simulate.m_list)->required();
  simulate_cmd->add_option("--ell-list", simulate.ell_list)->required();
  simulate_cmd->add_option("--phi-list", simulate.phi_list);
  simulate_cmd->add_option("--trials", simulate.trials);
  simulate_cmd->add_option("--seed", simulate.seed);
  simulate_cmd->add_option("--threads", simulate.threads);
  simulate_cmd->add_option("--out", simulate.out_prefix)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());  // CLI11 convention
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& error) {
    err << error.what() << "\n";
    return kExitValidation;
  }

  try {
    if (select_cmd->parsed()) return run_select(select, out, err);
    if (apportion_cmd->parsed()) {
      if (!apportion.distribution && !apportion.sample && !apportion.trace) {
        throw CliFailure{kExitValidation, "choose --distribution, --sample or --trace"};
      }
      return run_apportion(apportion, out, err);
    }
    if (gen_cmd->parsed()) return run_gen(gen, out, err);
    if (simulate_cmd->parsed()) return run_simulate(simulate, out, err);
  } catch (const CliFailure& failure) {
    err << failure.message << "\n";
    return failure.code;
  } catch (const ParseError& error) {
    err << error.what() << "\n";
    return kExitParse;
  } catch (const std::exception& error) {
    err << error.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace peersel::cli
