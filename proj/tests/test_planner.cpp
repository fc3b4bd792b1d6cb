#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "ven/errors.hpp"
#include "ven/planner.hpp"

namespace ven {
namespace {

PathTerms terms(double capacity, double loss_factor, std::size_t hops = 1) {
  return PathTerms{capacity, loss_factor, 0.0, hops};
}

PlanRequest max_energy(std::vector<PathTerms> paths, double cap) {
  PlanRequest r;
  r.paths = std::move(paths);
  r.objective = Objective::MaxEnergy;
  r.loss_cap = cap;
  return r;
}

PlanRequest min_loss(std::vector<PathTerms> paths, double floor) {
  PlanRequest r;
  r.paths = std::move(paths);
  r.objective = Objective::MinLoss;
  r.delivery_floor = floor;
  return r;
}

// Independent fractional knapsack: fill cheapest loss factor first.
double knapsack_energy(std::vector<PathTerms> paths, double cap) {
  std::stable_sort(paths.begin(), paths.end(),
                   [](const PathTerms& a, const PathTerms& b) { return a.loss_factor < b.loss_factor; });
  double energy = 0.0;
  for (const PathTerms& p : paths) {
    if (p.loss_factor == 0.0) {
      energy += p.capacity;
      continue;
    }
    const double take = std::min(p.capacity, cap / p.loss_factor);
    energy += take;
    cap -= take * p.loss_factor;
    if (cap <= 0.0) break;
  }
  return energy;
}

double knapsack_loss(std::vector<PathTerms> paths, double floor) {
  std::stable_sort(paths.begin(), paths.end(),
                   [](const PathTerms& a, const PathTerms& b) { return a.loss_factor < b.loss_factor; });
  double loss = 0.0;
  for (const PathTerms& p : paths) {
    const double take = std::min(p.capacity, floor);
    loss += take * p.loss_factor;
    floor -= take;
    if (floor <= 0.0) break;
  }
  return loss;
}

std::vector<PathTerms> random_terms(std::mt19937_64& rng, std::size_t count) {
  std::uniform_real_distribution<double> cap(0.0, 20.0);
  std::uniform_real_distribution<double> z(0.3, 1.0);
  std::vector<PathTerms> out;
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t hops = 1 + rng() % 4;
    const double keep = std::pow(z(rng), double(hops));
    out.push_back(terms(cap(rng), 1.0 / keep - 1.0, hops));
  }
  return out;
}

void expect_feasible(const TransferPlan& plan, const PlanRequest& r) {
  ASSERT_EQ(plan.assignments.size(), r.paths.size());
  const double tol = 1e-12 * std::max(1.0, plan.transferred);
  for (std::size_t j = 0; j < r.paths.size(); ++j) {
    EXPECT_GE(plan.assignments[j].energy, -tol);
    EXPECT_LE(plan.assignments[j].energy, r.paths[j].capacity + tol);
  }
  if (r.objective == Objective::MaxEnergy && std::isfinite(r.loss_cap)) {
    EXPECT_LE(plan.loss, r.loss_cap + 1e-12 * std::max(1.0, r.loss_cap));
  }
  if (r.objective == Objective::MinLoss && plan.status == PlanStatus::Optimal) {
    EXPECT_GE(plan.transferred, r.delivery_floor - 1e-12 * std::max(1.0, r.delivery_floor));
  }
}

TEST(PlannerNamesTest, RoundTrip) {
  EXPECT_EQ(parse_objective(to_string(Objective::MinLoss)), Objective::MinLoss);
  EXPECT_EQ(parse_objective("max-energy"), Objective::MaxEnergy);
  EXPECT_EQ(parse_solver("greedy"), SolverKind::Greedy);
  EXPECT_THROW(parse_objective("fastest"), std::invalid_argument);
  EXPECT_THROW(parse_solver("ipm"), std::invalid_argument);
}

TEST(PlanRequestTest, RejectsNegativeCaps) {
  EXPECT_THROW(max_energy({terms(1, 0.1)}, -1.0).validate(), ValidationError);
  EXPECT_THROW(min_loss({terms(1, 0.1)}, -0.5).validate(), ValidationError);
  EXPECT_THROW(max_energy({terms(-1, 0.1)}, 1.0).validate(), ValidationError);
  EXPECT_NO_THROW(max_energy({}, 0.0).validate());
}

TEST(MaxEnergyTest, SinglePathLooseCapSaturates) {
  // T = 5, d = 2, one hop at z = 0.81 (z_c = 0.9, z_d = 0.9), w f = 0.1 * 133.33...
  const double capacity = 32.4;
  const double lambda = 1.0 / 0.81 - 1.0;
  for (SolverKind kind : {SolverKind::Greedy, SolverKind::Simplex}) {
    const PlanRequest r = max_energy({terms(capacity, lambda)}, 1e6);
    const TransferPlan plan = solve(r, kind);
    EXPECT_EQ(plan.status, PlanStatus::Optimal);
    EXPECT_NEAR(plan.transferred, 32.4, 1e-12);
    EXPECT_NEAR(plan.loss, 32.4 * lambda, 1e-12);
  }
}

TEST(MaxEnergyTest, ZeroCapMeansNothingMoves) {
  for (SolverKind kind : {SolverKind::Greedy, SolverKind::Simplex}) {
    const TransferPlan plan = solve(max_energy({terms(32.4, 0.2346)}, 0.0), kind);
    EXPECT_EQ(plan.transferred, 0.0);
    EXPECT_EQ(plan.loss, 0.0);
  }
}

TEST(MaxEnergyTest, CheaperPathFillsFirst) {
  const PlanRequest r = max_energy({terms(10, 0.52, 2), terms(10, 0.11, 1)}, 1.63);
  for (SolverKind kind : {SolverKind::Greedy, SolverKind::Simplex}) {
    const TransferPlan plan = solve(r, kind);
    EXPECT_NEAR(plan.assignments[1].energy, 10.0, 1e-12);
    EXPECT_NEAR(plan.assignments[0].energy, (1.63 - 1.1) / 0.52, 1e-12);
    EXPECT_NEAR(plan.loss, 1.63, 1e-12);
    expect_feasible(plan, r);
  }
}

TEST(MinLossTest, FloorIsMetWithCheapestPaths) {
  const PlanRequest r = min_loss({terms(10, 0.11), terms(10, 0.52)}, 12.0);
  for (SolverKind kind : {SolverKind::Greedy, SolverKind::Simplex}) {
    const TransferPlan plan = solve(r, kind);
    EXPECT_EQ(plan.status, PlanStatus::Optimal);
    EXPECT_NEAR(plan.assignments[0].energy, 10.0, 1e-12);
    EXPECT_NEAR(plan.assignments[1].energy, 2.0, 1e-12);
    EXPECT_NEAR(plan.loss, 2.14, 1e-12);
  }
}

TEST(MinLossTest, ZeroFloorIsFree) {
  const TransferPlan plan = solve(min_loss({terms(10, 0.11), terms(10, 0.52)}, 0.0));
  EXPECT_EQ(plan.status, PlanStatus::Optimal);
  EXPECT_EQ(plan.transferred, 0.0);
  EXPECT_EQ(plan.loss, 0.0);
}

TEST(MinLossTest, FloorAtTotalCapacitySaturatesEverything) {
  const PlanRequest r = min_loss({terms(10, 0.11), terms(7.5, 0.52)}, 17.5);
  for (SolverKind kind : {SolverKind::Greedy, SolverKind::Simplex}) {
    const TransferPlan plan = solve(r, kind);
    EXPECT_EQ(plan.status, PlanStatus::Optimal);
    EXPECT_NEAR(plan.transferred, 17.5, 1e-12);
    EXPECT_NEAR(plan.loss, 1.1 + 7.5 * 0.52, 1e-12);
  }
}

TEST(MinLossTest, UnreachableFloorIsInfeasible) {
  const PlanRequest r = min_loss({terms(10, 0.11), terms(7.5, 0.52)}, 18.0);
  for (SolverKind kind : {SolverKind::Greedy, SolverKind::Simplex}) {
    const TransferPlan plan = solve(r, kind);
    EXPECT_EQ(plan.status, PlanStatus::Infeasible);
    EXPECT_NEAR(plan.transferred, 17.5, 1e-12);
  }
  EXPECT_EQ(solve(min_loss({}, 1.0)).status, PlanStatus::Infeasible);
}

TEST(GreedyTest, TiesPreferFewerHopsThenInputOrder) {
  const PlanRequest r = max_energy({terms(5, 0.25, 3), terms(5, 0.25, 1), terms(5, 0.25, 1)}, 1.5);
  const TransferPlan plan = solve_greedy(r);
  EXPECT_DOUBLE_EQ(plan.assignments[1].energy, 5.0);
  EXPECT_DOUBLE_EQ(plan.assignments[2].energy, 1.0);
  EXPECT_EQ(plan.assignments[0].energy, 0.0);
  EXPECT_EQ(solve_greedy(r).assignments[2].energy, plan.assignments[2].energy);
}

TEST(PlannerPropertyTest, GreedyMatchesSimplexAndKnapsackOracle) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto paths = random_terms(rng, 1 + rng() % 12);
    double total_loss = 0.0;
    double total_cap = 0.0;
    for (const PathTerms& p : paths) {
      total_loss += p.capacity * p.loss_factor;
      total_cap += p.capacity;
    }
    const PlanRequest pe = max_energy(paths, unit(rng) * 1.2 * total_loss);
    const TransferPlan g1 = solve(pe, SolverKind::Greedy);
    const TransferPlan s1 = solve(pe, SolverKind::Simplex);
    const double e_oracle = knapsack_energy(paths, pe.loss_cap);
    EXPECT_NEAR(g1.transferred, e_oracle, 1e-9 * std::max(1.0, e_oracle)) << trial;
    EXPECT_NEAR(s1.transferred, e_oracle, 1e-9 * std::max(1.0, e_oracle)) << trial;
    expect_feasible(g1, pe);
    expect_feasible(s1, pe);

    const PlanRequest pl = min_loss(paths, unit(rng) * total_cap);
    const TransferPlan g2 = solve(pl, SolverKind::Greedy);
    const TransferPlan s2 = solve(pl, SolverKind::Simplex);
    const double l_oracle = knapsack_loss(paths, pl.delivery_floor);
    EXPECT_NEAR(g2.loss, l_oracle, 1e-9 * std::max(1.0, l_oracle)) << trial;
    EXPECT_NEAR(s2.loss, l_oracle, 1e-9 * std::max(1.0, l_oracle)) << trial;
    expect_feasible(g2, pl);
    expect_feasible(s2, pl);
  }
}

TEST(PlannerPropertyTest, SmallProgramsMatchVertexEnumeration) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto paths = random_terms(rng, 1 + rng() % 4);
    const PlanRequest r = max_energy(paths, 3.0);
    const auto oracle = testing::vertex_enumeration(reduced_program(r));
    ASSERT_TRUE(oracle.has_value());
    EXPECT_NEAR(solve(r).transferred, oracle->objective, 1e-9 * std::max(1.0, oracle->objective));
  }
}

TEST(PlannerPropertyTest, OptimaAreMonotoneInCaps) {
  std::mt19937_64 rng(9);
  const auto paths = random_terms(rng, 8);
  double last_energy = -1.0;
  double last_loss = -1.0;
  for (double level = 0.0; level <= 40.0; level += 2.5) {
    const double e = solve(max_energy(paths, level)).transferred;
    const double l = solve(min_loss(paths, level)).loss;
    EXPECT_GE(e, last_energy - 1e-12);
    EXPECT_GE(l, last_loss - 1e-12);
    last_energy = e;
    last_loss = l;
  }
}

class FullProgramTest : public ::testing::Test {
 protected:
  FullProgramTest()
      : net_(RoadNetwork::build({1, 2, 3, 4, 5}, {{1, 1, 2, 0.5, 1500, 40},
                                                  {2, 1, 3, 1.0, 1400, 80},
                                                  {3, 2, 3, 0.6, 1800, 50},
                                                  {4, 3, 4, 0.8, 1700, 65},
                                                  {5, 2, 5, 0.7, 900, 55},
                                                  {6, 5, 4, 0.9, 1000, 70}})),
        routes_(net_, {{1, {2}, 12}, {2, {3, 4}, 15}, {3, {1, 5, 6}, 8}}),
        paths_(enumerate_paths(routes_, 1, 4, {3, EnumerationConfig::kUnlimited})) {}

  RoadNetwork net_;
  RouteSet routes_;
  std::vector<EnergyPath> paths_;
};

TEST_F(FullProgramTest, RateVariablesSettleAtTheirMaximum) {
  const EnergyParams params = EnergyParams::with_round_trip(0.9, 0.1, 5.0);
  ASSERT_EQ(paths_.size(), 3u);
  for (double cap : {0.0, 0.3, 1.0, 1e6}) {
    const lp::Solution full =
        lp::solve(full_program(paths_, params, Objective::MaxEnergy, cap, 0.0));
    ASSERT_EQ(full.status, lp::Status::Optimal);
    const PlanRequest r = make_request(paths_, params, Objective::MaxEnergy, cap, 0.0);
    EXPECT_NEAR(full.objective, solve(r).transferred, 1e-9) << "cap " << cap;
  }
  for (double floor : {0.0, 2.0, 5.0, 7.2}) {
    const lp::Solution full =
        lp::solve(full_program(paths_, params, Objective::MinLoss, 0.0, floor));
    ASSERT_EQ(full.status, lp::Status::Optimal);
    const PlanRequest r = make_request(paths_, params, Objective::MinLoss, 0.0, floor);
    EXPECT_NEAR(full.objective, solve(r).loss, 1e-9) << "floor " << floor;
  }
}

TEST_F(FullProgramTest, Fig2CapacitiesByHand) {
  const EnergyParams params = EnergyParams::with_round_trip(0.9, 0.1, 5.0);
  // Order: one-hop p3 along all of r3, then p1 (r1 then r2), then p2 (r3 then r2).
  EXPECT_NEAR(path_terms(paths_[0], params).capacity, 2.9 * 0.9 * 0.8, 1e-12);
  EXPECT_NEAR(path_terms(paths_[1], params).capacity, 3.2 * 0.81 * 1.2, 1e-12);
  EXPECT_NEAR(path_terms(paths_[2], params).capacity, 3.1 * 0.81 * 0.8, 1e-12);
  EXPECT_NEAR(path_terms(paths_[1], params).loss_factor, 1.0 / 0.81 - 1.0, 1e-15);
}

TEST(TheoremTest, LossDominatesWhenHalfOrLessIsRetained) {
  // z = 0.7 over two hops keeps 0.49 <= 1/2; z = 0.5 over one hop keeps exactly 1/2.
  const std::vector<PathTerms> paths = {terms(4, 1.0 / (0.7 * 0.7) - 1.0, 2), terms(6, 1.0, 1),
                                        terms(3, 1.0 / std::pow(0.6, 3) - 1.0, 3)};
  const std::vector<double> caps = {0, 1, 2, 4, 8, 16, 32};
  const std::vector<double> floors = {0, 2, 5, 9, 13};
  const TheoremReport report = check_loss_dominance(paths, caps, floors, 1000, 31);
  EXPECT_TRUE(report.premise_holds);
  EXPECT_TRUE(report.energy_nondecreasing_in_cap);
  EXPECT_TRUE(report.energy_saturates);
  EXPECT_TRUE(report.loss_nondecreasing_in_floor);
  EXPECT_EQ(report.samples, 1000u);
  EXPECT_EQ(report.dominance_violations, 0u);
  EXPECT_TRUE(report.ok());
  for (std::size_t i = 0; i < floors.size(); ++i) {
    EXPECT_GE(report.loss_optima[i], floors[i] - 1e-12);
  }
}

TEST(TheoremTest, LosslessPathBreaksThePremise) {
  const std::vector<PathTerms> paths = {terms(4, 1.0), terms(5, 0.0)};
  const std::vector<double> caps = {0, 1, 10};
  const std::vector<double> floors = {0, 3};
  const TheoremReport report = check_loss_dominance(paths, caps, floors, 100, 1);
  EXPECT_FALSE(report.premise_holds);
  EXPECT_EQ(report.premise_violations, (std::vector<std::size_t>{1}));
  EXPECT_FALSE(report.ok());
}

TEST(MultiSourceTest, TotalsAreSumsOfIndependentPlans) {
  const std::vector<PlanRequest> requests = {max_energy({terms(10, 0.11), terms(10, 0.52)}, 1.63),
                                             min_loss({terms(4, 0.3)}, 2.0),
                                             min_loss({terms(1, 0.3)}, 2.0)};
  const MultiSourcePlan multi = solve_multi_source(requests);
  ASSERT_EQ(multi.plans.size(), 3u);
  double transferred = 0.0;
  double loss = 0.0;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const TransferPlan alone = solve(requests[i]);
    EXPECT_EQ(multi.plans[i].transferred, alone.transferred);
    transferred += alone.transferred;
    loss += alone.loss;
  }
  EXPECT_EQ(multi.plans[2].status, PlanStatus::Infeasible);
  EXPECT_EQ(multi.transferred, transferred);
  EXPECT_EQ(multi.loss, loss);
}

}  // namespace
}  // namespace ven
