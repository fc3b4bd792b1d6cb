#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ven/planner.hpp"
#include "ven/scenario.hpp"

namespace ven {

inline constexpr std::string_view kToolVersion = "0.3.1";

/// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string scenario_hash(const Scenario& scenario);

struct PlanOptions {
  Objective objective = Objective::MaxEnergy;
  double loss_cap = std::numeric_limits<double>::infinity();
  double delivery_floor = 0.0;
  SolverKind solver = SolverKind::Simplex;
};

/// Scenario caps as plan options; absent caps mean no loss cap and a zero
/// delivery floor.
PlanOptions options_from_caps(const Scenario& scenario, Objective objective, SolverKind solver);

struct PairPlan {
  SourceTargetPair pair;
  std::vector<EnergyPath> paths;  // segment flows are effective (carrier) flows
  std::vector<PathTerms> terms;
  TransferPlan plan;
};

struct ScenarioPlan {
  std::vector<PairPlan> pairs;
  double transferred = 0.0;
  double loss = 0.0;
};

/// Enumerates every pair's paths once, on declared route flows, and re-plans
/// them under any parameter set. Path enumeration does not look at flows,
/// so changing the penetration only rescales segment flows.
class ScenarioPlanner {
 public:
  explicit ScenarioPlanner(Scenario scenario);

  ScenarioPlanner(const ScenarioPlanner&) = delete;
  ScenarioPlanner& operator=(const ScenarioPlanner&) = delete;

  const Scenario& scenario() const { return scenario_; }
  const std::vector<std::vector<EnergyPath>>& declared_paths() const { return paths_; }

  ScenarioPlan plan(const EnergyParams& params, double penetration,
                    const PlanOptions& options) const;
  ScenarioPlan plan(const PlanOptions& options) const {
    return plan(scenario_.params, scenario_.penetration, options);
  }

 private:
  Scenario scenario_;
  RouteSet routes_;
  std::vector<std::vector<EnergyPath>> paths_;
};

enum class SweepParameter { Efficiency, Window, PacketSize, Penetration };

std::string_view to_string(SweepParameter parameter);
/// Accepts z/efficiency, T/window, w/packet-size and penetration.
SweepParameter parse_sweep_parameter(std::string_view text);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::Efficiency;
  std::vector<double> values;

  /// Throws ValidationError unless values are non-empty, strictly
  /// increasing and inside the parameter's domain.
  void validate() const;
};

/// Nominal setting: z = 0.9, T = 5 h, w = 0.1 kWh, penetration 0.1 %.
struct Nominal {
  static constexpr double efficiency = 0.9;
  static constexpr double window = 5.0;
  static constexpr double packet_size = 0.1;
  static constexpr double penetration = 0.001;
};

struct PairTotals {
  SourceTargetPair pair;
  double transferred = 0.0;
  double loss = 0.0;
};

struct SweepRow {
  double value = 0.0;
  double transferred = 0.0;
  double loss = 0.0;
  std::vector<PairTotals> pairs;
};

struct Provenance {
  std::string scenario_hash;
  std::optional<std::uint64_t> seed;
  std::string solver;
  std::string version{kToolVersion};
};

struct SweepResult {
  SweepParameter parameter = SweepParameter::Efficiency;
  std::vector<SweepRow> rows;
  Provenance provenance;
};

/// Parameters for one sweep point: the swept parameter takes `value`, the
/// others keep the base values. An efficiency value replaces the round-trip
/// efficiency (z_c = value, z_d = 1).
std::pair<EnergyParams, double> sweep_point(SweepParameter parameter, double value,
                                            const EnergyParams& base, double base_penetration);

SweepResult run_sweep(const ScenarioPlanner& planner, const SweepSpec& spec,
                      const PlanOptions& options, const EnergyParams& base,
                      double base_penetration);

/// Header: parameter,value,transferred_kwh,loss_kwh,scenario_hash,seed,solver,version.
/// Numbers are written with 17 significant digits so they re-read exactly.
void write_sweep_csv(std::ostream& out, const SweepResult& result);
/// One row per (value, pair): value,source,target,transferred_kwh,loss_kwh.
void write_breakdown_csv(std::ostream& out, const SweepResult& result);
/// Reads write_sweep_csv output back; pair breakdowns are left empty.
/// Throws ParseError on malformed input.
SweepResult read_sweep_csv(std::istream& in);

/// Efficiency z* in (lo, hi) at which total loss equals total delivered
/// energy with every path saturated (no loss cap); below z* loss exceeds
/// delivery. Bisection to `tolerance`. Returns nullopt if loss does not
/// exceed delivery at `lo` or no path carries energy.
std::optional<double> find_crossover_efficiency(const ScenarioPlanner& planner,
                                                const EnergyParams& base, double penetration,
                                                double lo = 1e-6, double hi = 1.0,
                                                double tolerance = 1e-12);

/// Plan file: provenance, then per pair the status, totals and per-path
/// segments, coefficients and assignments.
std::string plan_to_json(const ScenarioPlan& plan, const PlanOptions& options,
                         const Provenance& provenance);

}  // namespace ven
