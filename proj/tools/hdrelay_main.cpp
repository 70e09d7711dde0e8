// Command-line frontend: capacities, rate-region curves, pipeline
// simulations, cut-set verification, and convergence sweeps, all
// reproducible from flags alone.
//
// Exit codes: 0 success, 2 usage error, 3 solver non-convergence,
// 4 zero-error violation, 5 cut-set violation.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hdrelay/capacity.hpp"
#include "hdrelay/coding.hpp"
#include "hdrelay/cutset.hpp"
#include "hdrelay/rate_region.hpp"
#include "hdrelay/serialize.hpp"
#include "hdrelay/simulator.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;
constexpr int kExitZeroError = 4;
constexpr int kExitCutSet = 5;

// Writes to --output if given (relative paths resolve under
// HDRELAY_OUTPUT_DIR when that is set), else to standard output.
void emit(const std::string& output_path, const std::string& text) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::path target(output_path);
  if (target.is_relative()) {
    if (const char* dir = std::getenv("HDRELAY_OUTPUT_DIR")) {
      target = std::filesystem::path(dir) / target;
    }
  }
  std::ofstream out(target);
  if (!out) {
    throw std::invalid_argument("cannot open output file: " + target.string());
  }
  out << text;
}

struct CapacityArgs {
  std::string model = "ternary";
  int relays = 1;
  std::string method = "closed-form";
  std::string output;
};

struct RegionArgs {
  int n_finite = 0;
  bool asymptotic = false;
  int points = 100;
  std::string output;
};

struct SimulateArgs {
  int relays = 1;
  int n = 0;
  int blocks = 0;
  std::vector<int> slots;
  bool optimize_slots = false;
  unsigned long seed = 1;
  bool two_source = false;
  int k0 = -1;
  std::string output;
};

struct CutsetArgs {
  int relays = 1;
  int relay_source = 0;  // 0 = single-source mode
  int trials = 200;
  unsigned long seed = 1;
  std::string output;
};

struct SweepArgs {
  int relays = 1;
  std::vector<int> n_list;
  std::string output;
};

hdrelay::ModelVariant parse_model(const std::string& name) {
  if (name == "ternary") return hdrelay::ModelVariant::Ternary;
  if (name == "binary") return hdrelay::ModelVariant::Binary;
  throw CLI::ValidationError("--model", "must be 'ternary' or 'binary'");
}

int run_capacity(const CapacityArgs& args) {
  hdrelay::ModelVariant model = parse_model(args.model);
  nlohmann::json out;
  if (args.method == "closed-form") {
    out = hdrelay::to_json(hdrelay::solve_cascade(args.relays, model));
  } else if (args.method == "optimize") {
    out = hdrelay::to_json(
        hdrelay::solve_cascade_full_support(args.relays, model));
  } else if (args.method == "both") {
    hdrelay::CapacityResult closed = hdrelay::solve_cascade(args.relays, model);
    hdrelay::CapacityResult opt =
        hdrelay::solve_cascade_full_support(args.relays, model);
    out = nlohmann::json{
        {"closed_form", hdrelay::to_json(closed)},
        {"full_support", hdrelay::to_json(opt)},
        {"cross_check_delta",
         std::abs(closed.capacity_bits - opt.capacity_bits)}};
  } else {
    throw CLI::ValidationError("--method",
                               "must be 'closed-form', 'optimize', or 'both'");
  }
  emit(args.output, out.dump(2) + "\n");
  return 0;
}

int run_region(const RegionArgs& args) {
  if (args.asymptotic == (args.n_finite > 0)) {
    throw CLI::ValidationError("region",
                               "give exactly one of --asymptotic, --n-finite");
  }
  const int grid = args.points + 1;  // --points K => K segments, K+1 samples
  const double cap = hdrelay::single_relay_capacity();

  std::vector<hdrelay::RegionCurve> curves;
  hdrelay::RegionCurve sum_line;
  sum_line.label = "sum_cap_line";
  for (int i = 0; i < grid; ++i) {
    double r0 = hdrelay::kLog2Of3 * i / (grid - 1);
    sum_line.points.push_back({r0, hdrelay::kLog2Of3 - r0});
  }
  curves.push_back(std::move(sum_line));

  hdrelay::RegionCurve outer;
  outer.label = "outer_bound";
  for (int i = 0; i < grid; ++i) {
    double r0 = cap * i / (grid - 1);
    outer.points.push_back({r0, hdrelay::outer_boundary_single_relay(r0)});
  }
  curves.push_back(std::move(outer));

  if (args.asymptotic) {
    curves.push_back(hdrelay::achievable_segment(grid));
  } else {
    curves.push_back(hdrelay::finite_n_achievable(args.n_finite));
  }

  std::ostringstream csv;
  hdrelay::write_region_csv(csv, curves);
  emit(args.output, csv.str());
  return 0;
}

int run_simulate(const SimulateArgs& args) {
  if (args.optimize_slots == !args.slots.empty()) {
    throw CLI::ValidationError("simulate",
                               "give exactly one of --slots, --optimize-slots");
  }
  hdrelay::ExperimentOptions opts;
  opts.blocks = args.blocks;
  opts.seed = args.seed;

  hdrelay::TransmissionReport rep;
  if (args.two_source) {
    if (args.relays != 1) {
      throw CLI::ValidationError("--two-source", "requires --relays 1");
    }
    if (args.optimize_slots) {
      throw CLI::ValidationError("--two-source", "requires explicit --slots");
    }
    if (args.k0 < 0) {
      throw CLI::ValidationError("--two-source", "requires --k0");
    }
    hdrelay::TwoSourceCodeSpec spec =
        hdrelay::TwoSourceCodeSpec::make(args.n, args.slots.at(0), args.k0);
    rep = hdrelay::run_two_source(spec, opts);
  } else {
    hdrelay::CodebookSpec spec;
    if (args.optimize_slots) {
      spec = hdrelay::optimize_slot_counts(args.n, args.relays);
    } else {
      if (static_cast<int>(args.slots.size()) != args.relays) {
        throw CLI::ValidationError("--slots",
                                   "needs one count per relay");
      }
      spec = hdrelay::CodebookSpec::make(args.n, args.relays, args.slots,
                                         hdrelay::ModelVariant::Ternary);
    }
    rep = hdrelay::run_pipeline(spec, opts);
  }

  emit(args.output, hdrelay::to_json(rep).dump(2) + "\n");
  bool clean = rep.messages_correct == rep.messages_sent &&
               rep.relay_messages_correct == rep.relay_messages_sent;
  if (!clean) {
    std::cerr << "zero-error violation: " << rep.messages_correct << "/"
              << rep.messages_sent << " source messages, "
              << rep.relay_messages_correct << "/" << rep.relay_messages_sent
              << " relay messages correct\n";
    return kExitZeroError;
  }
  return 0;
}

int run_cutset(const CutsetArgs& args) {
  const int m = args.relays;
  hdrelay::ChainDistribution exemplar =
      hdrelay::solve_cascade(m, hdrelay::ModelVariant::Ternary).chain;
  hdrelay::CutCheckReport report;
  if (args.relay_source > 0) {
    report = hdrelay::verify_two_source_ascending(exemplar, args.relay_source,
                                                  args.trials, args.seed);
  } else {
    report =
        hdrelay::verify_ascending_minimality(exemplar, args.trials, args.seed);
  }
  emit(args.output, hdrelay::to_json(report).dump(2) + "\n");
  if (!report.passed()) {
    std::cerr << "cut-set violation: " << report.violations.size()
              << " mismatching subsets\n";
    return kExitCutSet;
  }
  return 0;
}

int run_sweep(const SweepArgs& args) {
  std::vector<hdrelay::SweepRow> rows =
      hdrelay::sweep_rates(args.n_list, args.relays);
  std::ostringstream csv;
  hdrelay::write_sweep_csv(csv, rows);
  emit(args.output, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Zero-error capacities, rate regions, and pipeline simulations for "
      "noise-free half-duplex relay cascades"};
  app.require_subcommand(1);

  CapacityArgs cap_args;
  CLI::App* cap = app.add_subcommand(
      "capacity", "Solve for the cascade capacity and optimal edge pmfs");
  cap->add_option("--model", cap_args.model, "ternary|binary")
      ->check(CLI::IsMember({"ternary", "binary"}));
  cap->add_option("--relays", cap_args.relays, "relay count m")
      ->required()
      ->check(CLI::Range(1, 64));
  cap->add_option("--method", cap_args.method,
                  "closed-form|optimize|both (default closed-form)")
      ->check(CLI::IsMember({"closed-form", "optimize", "both"}));
  cap->add_option("--output", cap_args.output, "output file (default stdout)");

  RegionArgs reg_args;
  CLI::App* reg = app.add_subcommand(
      "region", "Emit two-source rate-region curves as CSV");
  reg->add_option("--n-finite", reg_args.n_finite,
                  "achievable frontier for this block length");
  reg->add_flag("--asymptotic", reg_args.asymptotic,
                "asymptotic achievable segment instead of finite n");
  reg->add_option("--points", reg_args.points, "grid segments (default 100)")
      ->check(CLI::Range(1, 100000));
  reg->add_option("--output", reg_args.output, "output file (default stdout)");

  SimulateArgs sim_args;
  CLI::App* sim = app.add_subcommand(
      "simulate", "Run the block pipeline and report decode accuracy");
  sim->add_option("--relays", sim_args.relays, "relay count m (default 1)")
      ->check(CLI::Range(1, 16));
  sim->add_option("--n", sim_args.n, "block length")->required();
  sim->add_option("--blocks", sim_args.blocks, "number of blocks B")
      ->required();
  sim->add_option("--slots", sim_args.slots,
                  "per-relay binary slot counts n_1,...,n_m")
      ->delimiter(',');
  sim->add_flag("--optimize-slots", sim_args.optimize_slots,
                "use the rate-optimal slot counts");
  sim->add_option("--seed", sim_args.seed, "message RNG seed (default 1)");
  sim->add_flag("--two-source", sim_args.two_source,
                "relay also injects messages (m = 1)");
  sim->add_option("--k0", sim_args.k0,
                  "source payload bits per block in two-source mode");
  sim->add_option("--output", sim_args.output, "output file (default stdout)");

  CutsetArgs cut_args;
  CLI::App* cut = app.add_subcommand(
      "cutset-check",
      "Brute-force cut enumeration against the ascending-set formulas");
  cut->add_option("--relays", cut_args.relays, "relay count m")
      ->required()
      ->check(CLI::Range(1, 5));
  cut->add_option("--relay-source", cut_args.relay_source,
                  "two-source mode with this relay index (needs m <= 4)")
      ->check(CLI::Range(1, 4));
  cut->add_option("--trials", cut_args.trials, "random chains (default 200)")
      ->check(CLI::Range(0, 1000000));
  cut->add_option("--seed", cut_args.seed, "chain RNG seed (default 1)");
  cut->add_option("--output", cut_args.output, "output file (default stdout)");

  SweepArgs swp_args;
  CLI::App* swp = app.add_subcommand(
      "sweep", "Rate-vs-capacity convergence table over block lengths");
  swp->add_option("--relays", swp_args.relays, "relay count m")
      ->required()
      ->check(CLI::Range(1, 16));
  swp->add_option("--n-list", swp_args.n_list, "block lengths, comma-separated")
      ->required()
      ->delimiter(',');
  swp->add_option("--output", swp_args.output, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (cap->parsed()) return run_capacity(cap_args);
    if (reg->parsed()) return run_region(reg_args);
    if (sim->parsed()) return run_simulate(sim_args);
    if (cut->parsed()) return run_cutset(cut_args);
    if (swp->parsed()) return run_sweep(swp_args);
    std::cerr << app.help();
    return kExitUsage;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const hdrelay::IntegrityError& e) {
    std::cerr << "zero-error violation: " << e.what() << "\n";
    return kExitZeroError;
  } catch (const hdrelay::SolverError& e) {
    std::cerr << "solver failed to converge: " << e.what()
              << " (best so far " << e.best_so_far << ")\n";
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
