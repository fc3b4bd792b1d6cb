#include "ven/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "ven/errors.hpp"

namespace ven {
namespace {

bool nonnegative(double value) { return std::isfinite(value) && value >= 0.0; }

std::string arc_label(const Arc& arc) { return "arc " + std::to_string(arc.id); }

}  // namespace

RoadNetwork RoadNetwork::build(std::vector<JunctionId> junctions, std::vector<Arc> arcs) {
  if (junctions.empty()) throw ValidationError("network has no junctions");
  if (arcs.empty()) throw ValidationError("network has no arcs");

  RoadNetwork net;
  net.junctions_ = std::move(junctions);
  net.arcs_ = std::move(arcs);

  for (std::size_t i = 0; i < net.junctions_.size(); ++i) {
    if (!net.junction_index_.emplace(net.junctions_[i], i).second) {
      throw ValidationError("duplicate junction id " + std::to_string(net.junctions_[i]));
    }
  }
  net.outgoing_.resize(net.junctions_.size());

  for (std::size_t i = 0; i < net.arcs_.size(); ++i) {
    const Arc& arc = net.arcs_[i];
    if (!net.arc_index_.emplace(arc.id, i).second) {
      throw ValidationError("duplicate arc id " + std::to_string(arc.id));
    }
    if (arc.tail == arc.head) {
      throw ValidationError(arc_label(arc) + " is a self-loop at junction " +
                            std::to_string(arc.tail));
    }
    auto tail = net.junction_index_.find(arc.tail);
    if (tail == net.junction_index_.end()) {
      throw ValidationError(arc_label(arc) + " has undeclared tail junction " +
                            std::to_string(arc.tail));
    }
    if (!net.junction_index_.contains(arc.head)) {
      throw ValidationError(arc_label(arc) + " has undeclared head junction " +
                            std::to_string(arc.head));
    }
    if (!nonnegative(arc.delay)) throw ValidationError(arc_label(arc) + " delay must be >= 0");
    if (!nonnegative(arc.flow)) throw ValidationError(arc_label(arc) + " flow must be >= 0");
    if (!nonnegative(arc.length)) throw ValidationError(arc_label(arc) + " length must be >= 0");
    net.outgoing_[tail->second].push_back(i);
  }
  return net;
}

const Arc& RoadNetwork::arc(ArcId id) const { return arcs_[arc_position(id)]; }

std::size_t RoadNetwork::arc_position(ArcId id) const {
  auto it = arc_index_.find(id);
  if (it == arc_index_.end()) throw std::out_of_range("unknown arc id " + std::to_string(id));
  return it->second;
}

std::span<const std::size_t> RoadNetwork::outgoing(JunctionId junction) const {
  auto it = junction_index_.find(junction);
  if (it == junction_index_.end()) {
    throw std::out_of_range("unknown junction id " + std::to_string(junction));
  }
  return outgoing_[it->second];
}

void validate_route(const RoadNetwork& network, const VehicularRoute& route) {
  const std::string label = "route " + std::to_string(route.id);
  if (route.arcs.empty()) throw ValidationError(label + " has no arcs");
  if (!nonnegative(route.flow)) throw ValidationError(label + " flow must be >= 0");

  std::unordered_set<JunctionId> visited;
  for (std::size_t k = 0; k < route.arcs.size(); ++k) {
    if (!network.has_arc(route.arcs[k])) {
      throw ValidationError(label + " references unknown arc " + std::to_string(route.arcs[k]));
    }
    const Arc& arc = network.arc(route.arcs[k]);
    if (k == 0) {
      visited.insert(arc.tail);
    } else if (network.arc(route.arcs[k - 1]).head != arc.tail) {
      throw ValidationError(label + " is disconnected between arcs " +
                            std::to_string(route.arcs[k - 1]) + " and " + std::to_string(arc.id));
    }
    if (!visited.insert(arc.head).second) {
      throw ValidationError(label + " is not loop-free: junction " + std::to_string(arc.head) +
                            " visited twice");
    }
  }
}

std::vector<JunctionId> route_junctions(const RoadNetwork& network, const VehicularRoute& route) {
  std::vector<JunctionId> out;
  out.reserve(route.arcs.size() + 1);
  for (ArcId id : route.arcs) {
    const Arc& arc = network.arc(id);
    if (out.empty()) out.push_back(arc.tail);
    out.push_back(arc.head);
  }
  return out;
}

SubRoute sub_route(const RoadNetwork& network, const VehicularRoute& route, std::size_t n,
                   std::size_t m) {
  if (n < 1 || n > m || m > route.arcs.size()) {
    throw std::out_of_range("sub-route (" + std::to_string(n) + ", " + std::to_string(m) +
                            ") outside route " + std::to_string(route.id) + " of length " +
                            std::to_string(route.arcs.size()));
  }
  SubRoute seg;
  seg.route = route.id;
  seg.first = n;
  seg.last = m;
  seg.entry = network.arc(route.arcs[n - 1]).tail;
  seg.exit = network.arc(route.arcs[m - 1]).head;
  for (std::size_t k = n - 1; k < m; ++k) seg.delay += network.arc(route.arcs[k]).delay;
  seg.flow = route.flow;
  return seg;
}

double route_delay(const RoadNetwork& network, const VehicularRoute& route) {
  double total = 0.0;
  for (ArcId id : route.arcs) total += network.arc(id).delay;
  return total;
}

RouteSet::RouteSet(const RoadNetwork& network, std::vector<VehicularRoute> routes)
    : network_(&network), routes_(std::move(routes)) {
  junctions_.reserve(routes_.size());
  delays_.reserve(routes_.size());
  for (std::size_t i = 0; i < routes_.size(); ++i) {
    const VehicularRoute& route = routes_[i];
    if (!route_index_.emplace(route.id, i).second) {
      throw ValidationError("duplicate route id " + std::to_string(route.id));
    }
    validate_route(network, route);
    junctions_.push_back(route_junctions(network, route));
    std::vector<double> delays;
    delays.reserve(route.arcs.size());
    for (ArcId id : route.arcs) delays.push_back(network.arc(id).delay);
    delays_.push_back(std::move(delays));
    for (std::size_t k = 0; k < route.arcs.size(); ++k) {
      departures_[junctions_[i][k]].push_back(Stop{i, k});
    }
  }
}

const VehicularRoute& RouteSet::route(RouteId id) const { return routes_[position_of(id)]; }

std::size_t RouteSet::position_of(RouteId id) const {
  auto it = route_index_.find(id);
  if (it == route_index_.end()) throw std::out_of_range("unknown route id " + std::to_string(id));
  return it->second;
}

std::span<const RouteSet::Stop> RouteSet::departures(JunctionId junction) const {
  auto it = departures_.find(junction);
  if (it == departures_.end()) return {};
  return it->second;
}

SubRoute RouteSet::segment(std::size_t index, std::size_t n, std::size_t m) const {
  return sub_route(*network_, routes_[index], n, m);
}

}  // namespace ven
