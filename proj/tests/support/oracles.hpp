#pragma once

// Independent reference implementations used only by tests.

#include <cstdint>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "ven/lp_solver.hpp"
#include "ven/network.hpp"
#include "ven/path_enumeration.hpp"

namespace ven::testing {

/// (route id, first, last) per segment, 1-based.
using PathKey = std::vector<std::tuple<RouteId, std::size_t, std::size_t>>;

PathKey key_of(const EnergyPath& path);
std::set<PathKey> keys_of(const std::vector<EnergyPath>& paths);

/// Every loop-free concatenation of route segments from s to t with at most
/// `max_hops` segments, found by trying every (route, n, m) at every step.
std::set<PathKey> brute_force_paths(const RoadNetwork& network,
                                    const std::vector<VehicularRoute>& routes, JunctionId source,
                                    JunctionId target, std::size_t max_hops, EnumerationMode mode);

struct SmallInstance {
  RoadNetwork network;
  std::vector<VehicularRoute> routes;
  JunctionId source = 0;
  JunctionId target = 0;
};

/// Random network with `junctions` nodes, random arcs and `route_count`
/// random loop-free walks as routes.
SmallInstance random_instance(std::uint64_t seed, std::size_t junctions, std::size_t route_count,
                              std::size_t max_route_arcs);

struct VertexOptimum {
  std::vector<double> x;
  double objective;
};

/// Best vertex over all n-subsets of active constraints (rows and finite
/// bounds). nullopt when no vertex is feasible. Only for tiny LPs.
std::optional<VertexOptimum> vertex_enumeration(const lp::LinearProgram& program);

}  // namespace ven::testing
