#include "ven/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "ven/errors.hpp"

namespace ven {

PathTerms path_terms(const EnergyPath& path, const EnergyParams& params) {
  const PathEconomics econ = economics(path, params);
  return PathTerms{econ.capacity, econ.loss_factor, econ.max_rate, econ.hops};
}

std::string_view to_string(Objective objective) {
  return objective == Objective::MaxEnergy ? "max-energy" : "min-loss";
}

Objective parse_objective(std::string_view text) {
  if (text == "max-energy") return Objective::MaxEnergy;
  if (text == "min-loss") return Objective::MinLoss;
  throw std::invalid_argument("unknown objective '" + std::string(text) +
                              "' (expected max-energy or min-loss)");
}

std::string_view to_string(SolverKind kind) {
  return kind == SolverKind::Greedy ? "greedy" : "simplex";
}

SolverKind parse_solver(std::string_view text) {
  if (text == "greedy") return SolverKind::Greedy;
  if (text == "simplex") return SolverKind::Simplex;
  throw std::invalid_argument("unknown solver '" + std::string(text) +
                              "' (expected greedy or simplex)");
}

std::string_view to_string(PlanStatus status) {
  return status == PlanStatus::Optimal ? "optimal" : "infeasible";
}

void PlanRequest::validate() const {
  if (std::isnan(loss_cap) || loss_cap < 0.0) throw ValidationError("loss cap must be >= 0");
  if (!std::isfinite(delivery_floor) || delivery_floor < 0.0) {
    throw ValidationError("delivery floor must be finite and >= 0");
  }
  for (std::size_t j = 0; j < paths.size(); ++j) {
    const PathTerms& p = paths[j];
    if (!std::isfinite(p.capacity) || p.capacity < 0.0 || !std::isfinite(p.loss_factor) ||
        p.loss_factor < 0.0 || !std::isfinite(p.rate) || p.rate < 0.0) {
      throw ValidationError("path " + std::to_string(j) + " has invalid capacity or loss factor");
    }
  }
}

PlanRequest make_request(std::span<const EnergyPath> paths, const EnergyParams& params,
                         Objective objective, double loss_cap, double delivery_floor) {
  params.validate();
  PlanRequest request;
  request.objective = objective;
  request.loss_cap = loss_cap;
  request.delivery_floor = delivery_floor;
  request.paths.reserve(paths.size());
  for (const EnergyPath& path : paths) request.paths.push_back(path_terms(path, params));
  return request;
}

void recompute_totals(TransferPlan& plan, std::span<const PathTerms> paths) {
  plan.transferred = 0.0;
  plan.loss = 0.0;
  for (std::size_t j = 0; j < paths.size(); ++j) {
    plan.transferred += plan.assignments[j].energy;
    plan.loss += paths[j].loss_factor * plan.assignments[j].energy;
  }
}

namespace {

TransferPlan empty_plan(const PlanRequest& request) {
  TransferPlan plan;
  plan.assignments.resize(request.paths.size());
  for (std::size_t j = 0; j < request.paths.size(); ++j) {
    plan.assignments[j].rate = request.paths[j].rate;
  }
  return plan;
}

double total_capacity(const PlanRequest& request) {
  double total = 0.0;
  for (const PathTerms& p : request.paths) total += p.capacity;
  return total;
}

bool floor_unreachable(const PlanRequest& request) {
  const double floor = request.delivery_floor;
  return total_capacity(request) < floor - 1e-9 * std::max(1.0, floor);
}

TransferPlan saturated_infeasible(const PlanRequest& request) {
  TransferPlan plan = empty_plan(request);
  for (std::size_t j = 0; j < request.paths.size(); ++j) {
    plan.assignments[j].energy = request.paths[j].capacity;
  }
  plan.status = PlanStatus::Infeasible;
  recompute_totals(plan, request.paths);
  return plan;
}

std::vector<std::size_t> cheapest_first(const PlanRequest& request) {
  std::vector<std::size_t> order(request.paths.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const PathTerms& pa = request.paths[a];
    const PathTerms& pb = request.paths[b];
    if (pa.loss_factor != pb.loss_factor) return pa.loss_factor < pb.loss_factor;
    return pa.hops < pb.hops;
  });
  return order;
}

TransferPlan from_solution(const PlanRequest& request, const lp::Solution& solution) {
  TransferPlan plan = empty_plan(request);
  for (std::size_t j = 0; j < request.paths.size(); ++j) {
    plan.assignments[j].energy = std::clamp(solution.x[j], 0.0, request.paths[j].capacity);
  }
  recompute_totals(plan, request.paths);
  return plan;
}

}  // namespace

TransferPlan solve_greedy(const PlanRequest& request) {
  request.validate();
  TransferPlan plan = empty_plan(request);
  const std::vector<std::size_t> order = cheapest_first(request);

  if (request.objective == Objective::MaxEnergy) {
    double budget = request.loss_cap;
    for (std::size_t j : order) {
      const PathTerms& p = request.paths[j];
      double x = p.capacity;
      if (p.loss_factor > 0.0 && std::isfinite(budget)) {
        if (p.loss_factor * x > budget) {
          x = budget / p.loss_factor;
          budget = 0.0;
        } else {
          budget = std::max(0.0, budget - p.loss_factor * x);
        }
      }
      plan.assignments[j].energy = x;
    }
  } else {
    if (floor_unreachable(request)) return saturated_infeasible(request);
    double need = request.delivery_floor;
    for (std::size_t j : order) {
      if (need <= 0.0) break;
      const double x = std::min(request.paths[j].capacity, need);
      plan.assignments[j].energy = x;
      need -= x;
    }
  }
  recompute_totals(plan, request.paths);
  return plan;
}

lp::LinearProgram reduced_program(const PlanRequest& request) {
  lp::LinearProgram program;
  const bool max_energy = request.objective == Objective::MaxEnergy;
  program.sense = max_energy ? lp::Sense::Maximize : lp::Sense::Minimize;
  std::vector<double> ones;
  std::vector<double> lambdas;
  for (const PathTerms& p : request.paths) {
    program.add_variable(max_energy ? 1.0 : p.loss_factor, 0.0, p.capacity);
    ones.push_back(1.0);
    lambdas.push_back(p.loss_factor);
  }
  if (max_energy) {
    if (std::isfinite(request.loss_cap)) {
      program.add_constraint(std::move(lambdas), lp::Relation::LessEqual, request.loss_cap);
    }
  } else {
    program.add_constraint(std::move(ones), lp::Relation::GreaterEqual, request.delivery_floor);
  }
  return program;
}

TransferPlan solve_max_energy(const PlanRequest& request) {
  if (request.objective != Objective::MaxEnergy) {
    throw std::invalid_argument("solve_max_energy needs a max-energy request");
  }
  request.validate();
  if (request.paths.empty()) return empty_plan(request);
  const lp::Solution solution = lp::solve(reduced_program(request));
  if (solution.status != lp::Status::Optimal) throw SolverError(solution.diagnostics);
  return from_solution(request, solution);
}

TransferPlan solve_min_loss(const PlanRequest& request) {
  if (request.objective != Objective::MinLoss) {
    throw std::invalid_argument("solve_min_loss needs a min-loss request");
  }
  request.validate();
  if (floor_unreachable(request)) return saturated_infeasible(request);
  if (request.paths.empty() || request.delivery_floor == 0.0) return empty_plan(request);
  const lp::Solution solution = lp::solve(reduced_program(request));
  if (solution.status == lp::Status::Infeasible) return saturated_infeasible(request);
  if (solution.status != lp::Status::Optimal) throw SolverError(solution.diagnostics);
  return from_solution(request, solution);
}

TransferPlan solve(const PlanRequest& request, SolverKind kind) {
  if (kind == SolverKind::Greedy) return solve_greedy(request);
  return request.objective == Objective::MaxEnergy ? solve_max_energy(request)
                                                   : solve_min_loss(request);
}

lp::LinearProgram full_program(std::span<const EnergyPath> paths, const EnergyParams& params,
                               Objective objective, double loss_cap, double delivery_floor) {
  const std::size_t count = paths.size();
  const double z = params.round_trip();
  const bool max_energy = objective == Objective::MaxEnergy;

  lp::LinearProgram program;
  program.sense = max_energy ? lp::Sense::Maximize : lp::Sense::Minimize;
  std::vector<double> lambdas(count);
  for (std::size_t j = 0; j < count; ++j) {
    lambdas[j] = 1.0 / retention(z, paths[j].hops()) - 1.0;
  }
  for (std::size_t j = 0; j < count; ++j) program.add_variable(max_energy ? 1.0 : lambdas[j]);
  for (std::size_t j = 0; j < count; ++j) program.add_variable(0.0);

  for (std::size_t j = 0; j < count; ++j) {
    const double slack = std::max(0.0, params.window - path_delay(paths[j]));
    std::vector<double> row(2 * count, 0.0);
    row[j] = 1.0;
    row[count + j] = -slack * retention(z, paths[j].hops());
    program.add_constraint(std::move(row), lp::Relation::LessEqual, 0.0);
    for (const SubRoute& seg : paths[j].segments) {
      std::vector<double> rate_row(2 * count, 0.0);
      rate_row[count + j] = 1.0;
      program.add_constraint(std::move(rate_row), lp::Relation::LessEqual,
                             params.packet_size * seg.flow);
    }
  }
  std::vector<double> coupling(2 * count, 0.0);
  if (max_energy) {
    if (std::isfinite(loss_cap)) {
      std::copy(lambdas.begin(), lambdas.end(), coupling.begin());
      program.add_constraint(std::move(coupling), lp::Relation::LessEqual, loss_cap);
    }
  } else {
    std::fill(coupling.begin(), coupling.begin() + static_cast<std::ptrdiff_t>(count), 1.0);
    program.add_constraint(std::move(coupling), lp::Relation::GreaterEqual, delivery_floor);
  }
  return program;
}

TheoremReport check_loss_dominance(std::span<const PathTerms> paths,
                                   std::span<const double> loss_caps,
                                   std::span<const double> delivery_floors, std::size_t samples,
                                   std::uint64_t seed, SolverKind kind) {
  TheoremReport report;
  for (std::size_t j = 0; j < paths.size(); ++j) {
    if (!(paths[j].loss_factor >= 1.0)) report.premise_violations.push_back(j);
  }
  report.premise_holds = report.premise_violations.empty();

  PlanRequest request;
  request.paths.assign(paths.begin(), paths.end());
  double total = 0.0;
  for (const PathTerms& p : paths) {
    total += p.capacity;
    report.saturation_cap += p.loss_factor * p.capacity;
  }
  const auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
  };

  request.objective = Objective::MaxEnergy;
  for (std::size_t k = 0; k < loss_caps.size(); ++k) {
    request.loss_cap = loss_caps[k];
    report.energy_optima.push_back(solve(request, kind).transferred);
    if (k > 0 && loss_caps[k] >= loss_caps[k - 1]) {
      const double prev = report.energy_optima[k - 1];
      const double cur = report.energy_optima[k];
      if (cur < prev && !close(cur, prev)) report.energy_nondecreasing_in_cap = false;
    }
  }
  request.loss_cap = report.saturation_cap;
  report.energy_saturates = close(solve(request, kind).transferred, total);

  request.objective = Objective::MinLoss;
  for (std::size_t k = 0; k < delivery_floors.size(); ++k) {
    request.delivery_floor = delivery_floors[k];
    report.loss_optima.push_back(solve(request, kind).loss);
    if (k > 0 && delivery_floors[k] >= delivery_floors[k - 1]) {
      const double prev = report.loss_optima[k - 1];
      const double cur = report.loss_optima[k];
      if (cur < prev && !close(cur, prev)) report.loss_nondecreasing_in_floor = false;
    }
  }

  if (report.premise_holds) {
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
      double transferred = 0.0;
      double loss = 0.0;
      for (const PathTerms& p : paths) {
        const double x = std::uniform_real_distribution<double>(0.0, p.capacity)(rng);
        transferred += x;
        loss += p.loss_factor * x;
      }
      ++report.samples;
      if (loss < transferred) ++report.dominance_violations;
    }
  }
  return report;
}

MultiSourcePlan solve_multi_source(std::span<const PlanRequest> requests, SolverKind kind) {
  MultiSourcePlan out;
  out.plans.reserve(requests.size());
  for (const PlanRequest& request : requests) {
    out.plans.push_back(solve(request, kind));
    out.transferred += out.plans.back().transferred;
    out.loss += out.plans.back().loss;
  }
  return out;
}

}  // namespace ven
