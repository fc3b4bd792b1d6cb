#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ven/energetics.hpp"
#include "ven/lp_solver.hpp"

namespace ven {

/// The solver-facing view of one energy path. With the rate fixed at its
/// maximum, each path reduces to a capacity c_j and a loss factor
/// lambda_j = 1/z^hops - 1.
struct PathTerms {
  double capacity = 0.0;
  double loss_factor = 0.0;
  double rate = 0.0;
  std::size_t hops = 1;
};

PathTerms path_terms(const EnergyPath& path, const EnergyParams& params);

enum class Objective {
  MaxEnergy,  // maximise delivered energy subject to a loss cap
  MinLoss,    // minimise loss subject to a delivery floor
};

std::string_view to_string(Objective objective);
/// Accepts "max-energy" and "min-loss"; throws std::invalid_argument otherwise.
Objective parse_objective(std::string_view text);

enum class SolverKind { Greedy, Simplex };

std::string_view to_string(SolverKind kind);
/// Accepts "greedy" and "simplex"; throws std::invalid_argument otherwise.
SolverKind parse_solver(std::string_view text);

struct PlanRequest {
  std::vector<PathTerms> paths;
  Objective objective = Objective::MaxEnergy;
  double loss_cap = std::numeric_limits<double>::infinity();  // used by MaxEnergy
  double delivery_floor = 0.0;                                // used by MinLoss

  /// Throws ValidationError on negative caps or malformed path terms.
  void validate() const;
};

PlanRequest make_request(std::span<const EnergyPath> paths, const EnergyParams& params,
                         Objective objective, double loss_cap, double delivery_floor);

enum class PlanStatus { Optimal, Infeasible };

std::string_view to_string(PlanStatus status);

struct Assignment {
  double energy = 0.0;  // x_j, kWh delivered
  double rate = 0.0;    // g_j, kWh per hour
};

struct TransferPlan {
  std::vector<Assignment> assignments;
  double transferred = 0.0;  // x(s,t)
  double loss = 0.0;         // L(s,t)
  PlanStatus status = PlanStatus::Optimal;
};

/// Delivered energy and loss recomputed from the assignments, summing in
/// path order.
void recompute_totals(TransferPlan& plan, std::span<const PathTerms> paths);

/// Fractional-knapsack solution of either objective: paths are filled in
/// ascending loss-factor order (ties: fewer hops, then input order) until
/// the loss cap or the delivery floor binds.
TransferPlan solve_greedy(const PlanRequest& request);

/// Maximise delivered energy under the loss cap with the generic LP solver.
TransferPlan solve_max_energy(const PlanRequest& request);

/// Minimise loss under the delivery floor with the generic LP solver. When
/// the floor exceeds the total capacity the plan saturates every path and
/// is marked infeasible.
TransferPlan solve_min_loss(const PlanRequest& request);

/// Dispatches on objective and solver kind.
TransferPlan solve(const PlanRequest& request, SolverKind kind = SolverKind::Simplex);

/// The reduced LP over delivered energies only (rates already at maximum).
lp::LinearProgram reduced_program(const PlanRequest& request);

/// The full formulation with both x_j and g_j as variables: per-path
/// window constraints x_j <= (T - d_j) z^hops g_j, per-segment rate
/// constraints g_j <= w f_i, the coupling constraint and nonnegativity.
/// Variables are ordered x_1..x_P, g_1..g_P.
lp::LinearProgram full_program(std::span<const EnergyPath> paths, const EnergyParams& params,
                               Objective objective, double loss_cap, double delivery_floor);

/// Outcome of checking the loss/transfer trade-off on one path set.
struct TheoremReport {
  bool premise_holds = false;  // z^hops <= 1/2 on every path
  std::vector<std::size_t> premise_violations;
  bool energy_nondecreasing_in_cap = true;
  bool energy_saturates = false;  // optimum reaches total capacity once the cap allows it
  double saturation_cap = 0.0;    // sum of lambda_j c_j
  bool loss_nondecreasing_in_floor = true;
  std::size_t samples = 0;
  std::size_t dominance_violations = 0;  // sampled plans with loss < transferred
  std::vector<double> energy_optima;
  std::vector<double> loss_optima;

  bool ok() const {
    return premise_holds && energy_nondecreasing_in_cap && energy_saturates &&
           loss_nondecreasing_in_floor && dominance_violations == 0;
  }
};

/// Sweeps the loss cap and delivery floor, re-solving each point, and
/// samples `samples` feasible plans uniformly from the capacity box to
/// check that loss never falls below delivered energy. Dominance is only
/// sampled when the premise holds.
TheoremReport check_loss_dominance(std::span<const PathTerms> paths,
                                   std::span<const double> loss_caps,
                                   std::span<const double> delivery_floors, std::size_t samples,
                                   std::uint64_t seed, SolverKind kind = SolverKind::Simplex);

struct MultiSourcePlan {
  std::vector<TransferPlan> plans;  // in request order
  double transferred = 0.0;
  double loss = 0.0;
};

/// Solves each request independently and sums the totals in request order.
MultiSourcePlan solve_multi_source(std::span<const PlanRequest> requests,
                                   SolverKind kind = SolverKind::Simplex);

}  // namespace ven
