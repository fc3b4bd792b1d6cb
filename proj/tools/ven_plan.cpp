// ven-plan: command-line front end for scenario validation, path
// enumeration, transfer planning, parameter sweeps and scenario generation.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ven/errors.hpp"
#include "ven/experiment.hpp"

namespace {

enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kValidation = 3,
  kSolver = 4,
  kIo = 5,
};

constexpr const char* kSeedVariable = "EVNET_SEED";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Optional overrides shared by enumerate, solve and sweep.
struct Overrides {
  std::optional<double> packet_size;
  std::optional<double> efficiency;
  std::optional<double> window;
  std::optional<double> penetration;
  std::optional<std::size_t> max_hops;
  std::optional<std::size_t> max_paths;
  std::optional<std::string> mode;

  void apply(ven::Scenario& s) const {
    if (efficiency) {
      s.params = ven::EnergyParams::with_round_trip(*efficiency, s.params.packet_size, s.params.window);
    }
    if (packet_size) s.params.packet_size = *packet_size;
    if (window) s.params.window = *window;
    if (penetration) s.penetration = *penetration;
    if (max_hops) s.enumeration.max_hops = *max_hops;
    if (max_paths) s.enumeration.max_paths = *max_paths;
    if (mode) s.enumeration.mode = ven::parse_enumeration_mode(*mode);
    s.validate();
  }
};

void add_param_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--packet-size", o.packet_size, "w: energy per vehicle per cycle, kWh");
  cmd->add_option("--efficiency", o.efficiency, "z: round-trip efficiency (z_c = z, z_d = 1)");
  cmd->add_option("--window", o.window, "T: transfer window, hours");
  cmd->add_option("--penetration", o.penetration, "fraction of vehicles carrying energy");
}

void add_enumeration_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--max-hops", o.max_hops, "H: most segments per path")->check(CLI::PositiveNumber);
  cmd->add_option("--max-paths", o.max_paths, "K: most paths per pair")->check(CLI::PositiveNumber);
  cmd->add_option("--mode", o.mode, "full-route or per-hop")
      ->check(CLI::IsMember({"full-route", "per-hop"}));
}

ven::Scenario load(const std::string& path, const Overrides& overrides) {
  ven::Scenario s = ven::load_scenario(path);
  overrides.apply(s);
  return s;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ven::IoError("cannot write " + path);
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out = open_output(path);
  out << text;
  if (!out) throw ven::IoError("cannot write " + path);
}

std::string describe(const ven::EnergyPath& path) {
  std::string out;
  for (const ven::SubRoute& seg : path.segments) {
    if (!out.empty()) out += ' ';
    out += 'r' + std::to_string(seg.route) + '[' + std::to_string(seg.first) + ".." +
           std::to_string(seg.last) + "] " + std::to_string(seg.entry) + "->" +
           std::to_string(seg.exit);
  }
  return out;
}

int cmd_validate(const std::string& file) {
  const ven::Scenario s = ven::load_scenario(file);
  std::cout << "ok: " << s.network.junctions().size() << " junctions, " << s.network.arcs().size()
            << " arcs, " << s.routes.size() << " routes, " << s.pairs.size()
            << " pairs, hash " << ven::scenario_hash(s) << '\n';
  return kOk;
}

int cmd_enumerate(const std::string& file, const Overrides& overrides) {
  const ven::Scenario s = load(file, overrides);
  const ven::ScenarioPlanner planner(s);
  for (std::size_t i = 0; i < s.pairs.size(); ++i) {
    const auto& paths = planner.declared_paths()[i];
    std::cout << "pair " << s.pairs[i].source << " -> " << s.pairs[i].target << ": "
              << paths.size() << " paths\n";
    for (std::size_t j = 0; j < paths.size(); ++j) {
      std::cout << "  " << j + 1 << "  hops=" << paths[j].hops() << " delay=" << fmt(paths[j].delay())
                << "  " << describe(paths[j]) << '\n';
    }
  }
  return kOk;
}

struct SolveArgs {
  std::string objective = "max-energy";
  std::string solver = "simplex";
  std::optional<double> loss_cap;
  std::optional<double> delivery_floor;
};

ven::PlanOptions plan_options(const ven::Scenario& s, const SolveArgs& args) {
  ven::PlanOptions options = ven::options_from_caps(s, ven::parse_objective(args.objective),
                                                    ven::parse_solver(args.solver));
  if (args.loss_cap) options.loss_cap = *args.loss_cap;
  if (args.delivery_floor) options.delivery_floor = *args.delivery_floor;
  return options;
}

ven::Provenance provenance(const ven::Scenario& s, const ven::PlanOptions& options) {
  ven::Provenance p;
  p.scenario_hash = ven::scenario_hash(s);
  p.seed = s.seed;
  p.solver = std::string(ven::to_string(options.solver));
  return p;
}

int cmd_solve(const std::string& file, const Overrides& overrides, const SolveArgs& args,
              const std::string& output) {
  const ven::Scenario s = load(file, overrides);
  const ven::PlanOptions options = plan_options(s, args);
  const ven::ScenarioPlanner planner(s);
  const ven::ScenarioPlan plan = planner.plan(options);
  for (const ven::PairPlan& pair : plan.pairs) {
    std::cout << "pair " << pair.pair.source << " -> " << pair.pair.target << ": "
              << ven::to_string(pair.plan.status) << ", " << pair.paths.size()
              << " paths, transferred " << fmt(pair.plan.transferred) << " kWh, loss "
              << fmt(pair.plan.loss) << " kWh\n";
  }
  std::cout << "total transferred " << fmt(plan.transferred) << " kWh, loss " << fmt(plan.loss)
            << " kWh\n";
  if (!output.empty()) write_text(output, ven::plan_to_json(plan, options, provenance(s, options)));
  return kOk;
}

struct SweepArgs {
  std::string parameter;
  std::vector<double> values;
  std::string output;
  std::string breakdown;
  bool crossover = false;
};

int cmd_sweep(const std::string& file, const Overrides& overrides, const SolveArgs& solve,
              const SweepArgs& args) {
  const ven::Scenario s = load(file, overrides);
  const ven::PlanOptions options = plan_options(s, solve);
  const ven::ScenarioPlanner planner(s);
  const ven::SweepSpec spec{ven::parse_sweep_parameter(args.parameter), args.values};
  ven::SweepResult result = ven::run_sweep(planner, spec, options, s.params, s.penetration);
  result.provenance = provenance(s, options);

  std::ostringstream csv;
  ven::write_sweep_csv(csv, result);
  write_text(args.output, csv.str());
  if (!args.breakdown.empty()) {
    std::ostringstream rows;
    ven::write_breakdown_csv(rows, result);
    write_text(args.breakdown, rows.str());
  }
  if (args.crossover) {
    const auto z = ven::find_crossover_efficiency(planner, s.params, s.penetration);
    std::cerr << "crossover efficiency: " << (z ? fmt(*z) : std::string("none")) << '\n';
  }
  return kOk;
}

struct GenerateArgs {
  std::optional<std::uint64_t> seed;
  std::string scale = "desk";
  std::optional<std::size_t> junctions;
  std::optional<std::size_t> arcs;
  std::optional<std::size_t> routes;
  std::optional<std::size_t> sources;
  std::optional<double> max_length;
  std::string output;
};

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedVariable);
  if (env == nullptr || *env == '\0') return 42;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used == std::string(env).size()) return v;
  } catch (const std::exception&) {
  }
  throw CLI::ValidationError(std::string(kSeedVariable) + " must be a nonnegative integer");
}

int cmd_generate(const GenerateArgs& args, const Overrides& overrides) {
  const std::uint64_t seed = args.seed ? *args.seed : default_seed();
  ven::GeneratorConfig config = args.scale == "full" ? ven::GeneratorConfig::full_scale(seed)
                                                     : ven::GeneratorConfig::desk_scale(seed);
  if (args.junctions) config.junctions = *args.junctions;
  if (args.arcs) config.arcs = *args.arcs;
  if (args.routes) config.routes = *args.routes;
  if (args.sources) config.sources = *args.sources;
  if (args.max_length) config.max_route_length_km = *args.max_length;
  ven::Scenario s = ven::generate_scenario(config);
  overrides.apply(s);
  write_text(args.output, ven::serialize_scenario(s));
  std::cerr << "generated seed " << seed << ", hash " << ven::scenario_hash(s) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plan energy transfers carried by electric vehicles over a road network"};
  app.set_version_flag("--version", std::string(ven::kToolVersion));
  app.require_subcommand(1);

  std::string file;
  Overrides overrides;
  SolveArgs solve;
  SweepArgs sweep;
  GenerateArgs generate;
  std::string plan_output;

  auto* validate = app.add_subcommand("validate", "Parse and check a scenario file");
  validate->add_option("scenario", file, "scenario JSON")->required();

  auto* enumerate = app.add_subcommand("enumerate", "List the energy paths of every pair");
  enumerate->add_option("scenario", file, "scenario JSON")->required();
  add_enumeration_flags(enumerate, overrides);

  const auto add_solve_flags = [&](CLI::App* cmd) {
    cmd->add_option("scenario", file, "scenario JSON")->required();
    add_param_flags(cmd, overrides);
    add_enumeration_flags(cmd, overrides);
    cmd->add_option("--objective", solve.objective, "max-energy or min-loss")
        ->check(CLI::IsMember({"max-energy", "min-loss"}))
        ->capture_default_str();
    cmd->add_option("--solver", solve.solver, "greedy or simplex")
        ->check(CLI::IsMember({"greedy", "simplex"}))
        ->capture_default_str();
    cmd->add_option("--loss-cap", solve.loss_cap, "L: loss budget per pair, kWh")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--delivery-floor", solve.delivery_floor, "X: delivery target per pair, kWh")
        ->check(CLI::NonNegativeNumber);
  };

  auto* solve_cmd = app.add_subcommand("solve", "Plan transfers for every pair");
  add_solve_flags(solve_cmd);
  solve_cmd->add_option("-o,--output", plan_output, "plan JSON file ('-' for stdout)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Re-plan over a list of values of one parameter");
  add_solve_flags(sweep_cmd);
  sweep_cmd->add_option("--parameter", sweep.parameter, "z, T, w or penetration")
      ->required()
      ->check(CLI::IsMember({"z", "T", "w", "penetration", "efficiency", "window", "packet-size"}));
  sweep_cmd->add_option("--values", sweep.values, "comma-separated, strictly increasing")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("-o,--output", sweep.output, "CSV file (default stdout)");
  sweep_cmd->add_option("--breakdown", sweep.breakdown, "per-pair CSV file");
  sweep_cmd->add_flag("--crossover", sweep.crossover,
                      "also report the efficiency where loss equals delivered energy");

  auto* generate_cmd = app.add_subcommand("generate", "Write a seeded synthetic scenario");
  generate_cmd->add_option("--seed", generate.seed,
                           std::string("generator seed (default $") + kSeedVariable + " or 42)");
  generate_cmd->add_option("--scale", generate.scale, "desk (100 junctions) or full (998)")
      ->check(CLI::IsMember({"desk", "full"}))
      ->capture_default_str();
  generate_cmd->add_option("--junctions", generate.junctions);
  generate_cmd->add_option("--arcs", generate.arcs);
  generate_cmd->add_option("--routes", generate.routes);
  generate_cmd->add_option("--sources", generate.sources, "source junctions sharing one target");
  generate_cmd->add_option("--max-length", generate.max_length, "route length cap, km");
  generate_cmd->add_option("-o,--output", generate.output, "scenario file (default stdout)");
  add_param_flags(generate_cmd, overrides);
  add_enumeration_flags(generate_cmd, overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*validate) return cmd_validate(file);
    if (*enumerate) return cmd_enumerate(file, overrides);
    if (*solve_cmd) return cmd_solve(file, overrides, solve, plan_output);
    if (*sweep_cmd) return cmd_sweep(file, overrides, solve, sweep);
    if (*generate_cmd) return cmd_generate(generate, overrides);
  } catch (const ven::ParseError& e) {
    std::cerr << "parse error: " << (file.empty() ? "" : file + ": ") << e.what() << '\n';
    return kParse;
  } catch (const ven::ValidationError& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kValidation;
  } catch (const ven::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolver;
  } catch (const ven::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
