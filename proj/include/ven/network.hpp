#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace ven {

using JunctionId = std::int64_t;
using ArcId = std::int64_t;
using RouteId = std::int64_t;

/// Directed road segment between two junctions.
///
/// `delay` is the constant traversal time in hours and `flow` the vehicle
/// count per hour observed on the arc. `length` (km) is only consulted by the
/// scenario generator when it caps route lengths.
struct Arc {
  ArcId id = 0;
  JunctionId tail = 0;
  JunctionId head = 0;
  double delay = 0.0;
  double flow = 0.0;
  double length = 0.0;

  bool operator==(const Arc&) const = default;
};

/// Immutable directed road graph with an outgoing-arc index per junction.
class RoadNetwork {
 public:
  RoadNetwork() = default;

  /// Validates ids and arc attributes and builds the adjacency index.
  /// Throws ValidationError on duplicate ids, dangling endpoints, self
  /// loops, negative or non-finite delay/flow/length, or empty inputs.
  static RoadNetwork build(std::vector<JunctionId> junctions, std::vector<Arc> arcs);

  std::span<const JunctionId> junctions() const { return junctions_; }
  std::span<const Arc> arcs() const { return arcs_; }

  bool has_junction(JunctionId id) const { return junction_index_.contains(id); }
  bool has_arc(ArcId id) const { return arc_index_.contains(id); }

  /// Throws std::out_of_range for an unknown id.
  const Arc& arc(ArcId id) const;
  std::size_t arc_position(ArcId id) const;

  /// Positions into arcs() of the arcs leaving `junction`, in declaration order.
  std::span<const std::size_t> outgoing(JunctionId junction) const;

  bool operator==(const RoadNetwork& other) const {
    return junctions_ == other.junctions_ && arcs_ == other.arcs_;
  }

 private:
  std::vector<JunctionId> junctions_;
  std::vector<Arc> arcs_;
  std::unordered_map<JunctionId, std::size_t> junction_index_;
  std::unordered_map<ArcId, std::size_t> arc_index_;
  std::vector<std::vector<std::size_t>> outgoing_;
};

/// A loop-free chain of connected arcs travelled by `flow` vehicles per hour.
struct VehicularRoute {
  RouteId id = 0;
  std::vector<ArcId> arcs;
  double flow = 0.0;

  bool operator==(const VehicularRoute&) const = default;
};

/// Throws ValidationError unless the route is non-empty, references known
/// arcs, is connected head-to-tail, visits no junction twice and has a
/// finite nonnegative flow.
void validate_route(const RoadNetwork& network, const VehicularRoute& route);

/// Junctions visited by the route: tail of the first arc, then each head.
std::vector<JunctionId> route_junctions(const RoadNetwork& network, const VehicularRoute& route);

/// Contiguous portion of a route from its `first`-th to `last`-th arc
/// (1-based, inclusive).
struct SubRoute {
  RouteId route = 0;
  std::size_t first = 1;
  std::size_t last = 1;
  JunctionId entry = 0;
  JunctionId exit = 0;
  double delay = 0.0;
  double flow = 0.0;

  std::size_t arc_count() const { return last - first + 1; }

  bool operator==(const SubRoute&) const = default;
};

/// Extracts arcs n..m (1-based, inclusive) of `route`.
/// Throws std::out_of_range unless 1 <= n <= m <= route.arcs.size().
SubRoute sub_route(const RoadNetwork& network, const VehicularRoute& route, std::size_t n,
                   std::size_t m);

double route_delay(const RoadNetwork& network, const VehicularRoute& route);
inline double route_delay(const SubRoute& segment) { return segment.delay; }

/// Validated collection of routes plus the lookup tables path search needs.
///
/// Holds a reference to the network, which must outlive the RouteSet.
class RouteSet {
 public:
  /// A point where a route leaves a junction: `position` is the 0-based
  /// index of the route arc whose tail is that junction.
  struct Stop {
    std::size_t route;
    std::size_t position;
  };

  RouteSet(const RoadNetwork& network, std::vector<VehicularRoute> routes);

  const RoadNetwork& network() const { return *network_; }
  std::span<const VehicularRoute> routes() const { return routes_; }
  std::size_t size() const { return routes_.size(); }

  bool contains(RouteId id) const { return route_index_.contains(id); }
  /// Throws std::out_of_range for an unknown id.
  const VehicularRoute& route(RouteId id) const;
  std::size_t position_of(RouteId id) const;

  /// Junction sequence of the route at position `index` (size = arcs + 1).
  std::span<const JunctionId> junctions(std::size_t index) const { return junctions_[index]; }
  /// Arc delays of the route at position `index`, in route order.
  std::span<const double> delays(std::size_t index) const { return delays_[index]; }

  /// All (route, position) pairs whose arc departs `junction`.
  std::span<const Stop> departures(JunctionId junction) const;

  SubRoute segment(std::size_t index, std::size_t n, std::size_t m) const;

 private:
  const RoadNetwork* network_;
  std::vector<VehicularRoute> routes_;
  std::unordered_map<RouteId, std::size_t> route_index_;
  std::vector<std::vector<JunctionId>> junctions_;
  std::vector<std::vector<double>> delays_;
  std::unordered_map<JunctionId, std::vector<Stop>> departures_;
};

}  // namespace ven
