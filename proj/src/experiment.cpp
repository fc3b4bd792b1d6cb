#include "ven/experiment.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "ven/errors.hpp"

namespace ven {

std::string scenario_hash(const Scenario& scenario) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_scenario(scenario)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

PlanOptions options_from_caps(const Scenario& scenario, Objective objective, SolverKind solver) {
  PlanOptions options;
  options.objective = objective;
  options.solver = solver;
  if (scenario.caps.loss_cap) options.loss_cap = *scenario.caps.loss_cap;
  if (scenario.caps.delivery_floor) options.delivery_floor = *scenario.caps.delivery_floor;
  return options;
}

ScenarioPlanner::ScenarioPlanner(Scenario scenario)
    : scenario_(std::move(scenario)), routes_(scenario_.network, scenario_.routes) {
  paths_.reserve(scenario_.pairs.size());
  for (const SourceTargetPair& pair : scenario_.pairs) {
    paths_.push_back(enumerate_paths(routes_, pair.source, pair.target, scenario_.enumeration));
  }
}

ScenarioPlan ScenarioPlanner::plan(const EnergyParams& params, double penetration,
                                   const PlanOptions& options) const {
  ScenarioPlan out;
  out.pairs.reserve(paths_.size());
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    PairPlan pair;
    pair.pair = scenario_.pairs[i];
    pair.paths = paths_[i];
    for (EnergyPath& path : pair.paths) {
      for (SubRoute& seg : path.segments) seg.flow = seg.flow * penetration;
    }
    const PlanRequest request = make_request(pair.paths, params, options.objective,
                                             options.loss_cap, options.delivery_floor);
    pair.terms = request.paths;
    pair.plan = solve(request, options.solver);
    out.transferred += pair.plan.transferred;
    out.loss += pair.plan.loss;
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

std::string_view to_string(SweepParameter parameter) {
  switch (parameter) {
    case SweepParameter::Efficiency: return "z";
    case SweepParameter::Window: return "T";
    case SweepParameter::PacketSize: return "w";
    case SweepParameter::Penetration: return "penetration";
  }
  return "?";
}

SweepParameter parse_sweep_parameter(std::string_view text) {
  if (text == "z" || text == "efficiency") return SweepParameter::Efficiency;
  if (text == "T" || text == "window") return SweepParameter::Window;
  if (text == "w" || text == "packet-size") return SweepParameter::PacketSize;
  if (text == "penetration") return SweepParameter::Penetration;
  throw std::invalid_argument("unknown sweep parameter '" + std::string(text) +
                              "' (expected z, T, w or penetration)");
}

void SweepSpec::validate() const {
  if (values.empty()) throw ValidationError("sweep needs at least one value");
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (i > 0 && !(v > values[i - 1])) {
      throw ValidationError("sweep values must be strictly increasing");
    }
    bool in_domain = std::isfinite(v);
    switch (parameter) {
      case SweepParameter::Efficiency: in_domain = in_domain && v > 0.0 && v <= 1.0; break;
      case SweepParameter::Window: in_domain = in_domain && v >= 0.0; break;
      case SweepParameter::PacketSize: in_domain = in_domain && v > 0.0; break;
      case SweepParameter::Penetration: in_domain = in_domain && v >= 0.0 && v <= 1.0; break;
    }
    if (!in_domain) {
      throw ValidationError("sweep value " + std::to_string(v) + " is outside the domain of " +
                            std::string(to_string(parameter)));
    }
  }
}

std::pair<EnergyParams, double> sweep_point(SweepParameter parameter, double value,
                                            const EnergyParams& base, double base_penetration) {
  EnergyParams params = base;
  double penetration = base_penetration;
  switch (parameter) {
    case SweepParameter::Efficiency:
      params = EnergyParams::with_round_trip(value, base.packet_size, base.window);
      break;
    case SweepParameter::Window: params.window = value; break;
    case SweepParameter::PacketSize: params.packet_size = value; break;
    case SweepParameter::Penetration: penetration = value; break;
  }
  return {params, penetration};
}

SweepResult run_sweep(const ScenarioPlanner& planner, const SweepSpec& spec,
                      const PlanOptions& options, const EnergyParams& base,
                      double base_penetration) {
  spec.validate();
  SweepResult result;
  result.parameter = spec.parameter;
  result.provenance.scenario_hash = scenario_hash(planner.scenario());
  result.provenance.seed = planner.scenario().seed;
  result.provenance.solver = std::string(to_string(options.solver));
  for (double value : spec.values) {
    const auto [params, penetration] = sweep_point(spec.parameter, value, base, base_penetration);
    const ScenarioPlan plan = planner.plan(params, penetration, options);
    SweepRow row;
    row.value = value;
    row.transferred = plan.transferred;
    row.loss = plan.loss;
    for (const PairPlan& pair : plan.pairs) {
      row.pairs.push_back({pair.pair, pair.plan.transferred, pair.plan.loss});
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& cell, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size()) {
    throw ParseError("invalid number '" + cell + "'", line);
  }
  return v;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

constexpr const char* kSweepHeader =
    "parameter,value,transferred_kwh,loss_kwh,scenario_hash,seed,solver,version";

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  const Provenance& p = result.provenance;
  const std::string seed = p.seed ? std::to_string(*p.seed) : "";
  out << kSweepHeader << "\r\n";
  for (const SweepRow& row : result.rows) {
    out << to_string(result.parameter) << ',' << format_number(row.value) << ','
        << format_number(row.transferred) << ',' << format_number(row.loss) << ','
        << p.scenario_hash << ',' << seed << ',' << p.solver << ',' << p.version << "\r\n";
  }
}

void write_breakdown_csv(std::ostream& out, const SweepResult& result) {
  out << "value,source,target,transferred_kwh,loss_kwh\r\n";
  for (const SweepRow& row : result.rows) {
    for (const PairTotals& pair : row.pairs) {
      out << format_number(row.value) << ',' << pair.pair.source << ',' << pair.pair.target << ','
          << format_number(pair.transferred) << ',' << format_number(pair.loss) << "\r\n";
    }
  }
}

SweepResult read_sweep_csv(std::istream& in) {
  SweepResult result;
  std::string line;
  std::size_t number = 0;
  auto next = [&]() {
    if (!std::getline(in, line)) return false;
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  if (!next() || line != kSweepHeader) throw ParseError("missing or unexpected CSV header", 1);
  while (next()) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_row(line);
    if (cells.size() != 8) throw ParseError("expected 8 columns", number);
    try {
      result.parameter = parse_sweep_parameter(cells[0]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), number);
    }
    SweepRow row;
    row.value = parse_number(cells[1], number);
    row.transferred = parse_number(cells[2], number);
    row.loss = parse_number(cells[3], number);
    result.rows.push_back(row);
    result.provenance.scenario_hash = cells[4];
    result.provenance.seed =
        cells[5].empty() ? std::nullopt : std::optional<std::uint64_t>(std::stoull(cells[5]));
    result.provenance.solver = cells[6];
    result.provenance.version = cells[7];
  }
  return result;
}

std::optional<double> find_crossover_efficiency(const ScenarioPlanner& planner,
                                                const EnergyParams& base, double penetration,
                                                double lo, double hi, double tolerance) {
  PlanOptions options;
  options.objective = Objective::MaxEnergy;
  options.solver = SolverKind::Greedy;
  // With no loss cap every path is saturated and the excess
  // loss - delivered = sum_j slack_j g_j (1 - 2 z^hops) falls as z grows.
  const auto excess = [&](double z) {
    const ScenarioPlan plan = planner.plan(
        EnergyParams::with_round_trip(z, base.packet_size, base.window), penetration, options);
    return std::pair{plan.loss - plan.transferred, plan.transferred};
  };
  const auto [at_lo, carried] = excess(lo);
  if (!(carried > 0.0) || !(at_lo > 0.0)) return std::nullopt;
  if (excess(hi).first > 0.0) return std::nullopt;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (excess(mid).first > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string plan_to_json(const ScenarioPlan& plan, const PlanOptions& options,
                         const Provenance& provenance) {
  using Json = nlohmann::ordered_json;
  Json root;
  root["version"] = provenance.version;
  root["scenario_hash"] = provenance.scenario_hash;
  root["seed"] = provenance.seed ? Json(*provenance.seed) : Json(nullptr);
  root["solver"] = provenance.solver;
  root["objective"] = std::string(to_string(options.objective));
  root["loss_cap"] = std::isfinite(options.loss_cap) ? Json(options.loss_cap) : Json(nullptr);
  root["delivery_floor"] = options.delivery_floor;
  root["transferred_kwh"] = plan.transferred;
  root["loss_kwh"] = plan.loss;
  root["pairs"] = Json::array();
  for (const PairPlan& pair : plan.pairs) {
    Json p;
    p["source"] = pair.pair.source;
    p["target"] = pair.pair.target;
    p["status"] = std::string(to_string(pair.plan.status));
    p["transferred_kwh"] = pair.plan.transferred;
    p["loss_kwh"] = pair.plan.loss;
    p["paths"] = Json::array();
    for (std::size_t j = 0; j < pair.paths.size(); ++j) {
      Json segs = Json::array();
      for (const SubRoute& seg : pair.paths[j].segments) {
        segs.push_back({{"route", seg.route},
                        {"first", seg.first},
                        {"last", seg.last},
                        {"entry", seg.entry},
                        {"exit", seg.exit}});
      }
      p["paths"].push_back({{"segments", segs},
                            {"hops", pair.terms[j].hops},
                            {"delay_h", pair.paths[j].delay()},
                            {"rate_kwh_per_h", pair.plan.assignments[j].rate},
                            {"capacity_kwh", pair.terms[j].capacity},
                            {"loss_factor", pair.terms[j].loss_factor},
                            {"energy_kwh", pair.plan.assignments[j].energy}});
    }
    root["pairs"].push_back(std::move(p));
  }
  return root.dump(2) + "\n";
}

}  // namespace ven
