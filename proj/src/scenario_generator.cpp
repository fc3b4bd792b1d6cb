#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "ven/errors.hpp"
#include "ven/scenario.hpp"

namespace ven {

GeneratorConfig GeneratorConfig::desk_scale(std::uint64_t seed) {
  GeneratorConfig config;
  config.seed = seed;
  return config;
}

GeneratorConfig GeneratorConfig::full_scale(std::uint64_t seed) {
  GeneratorConfig config;
  config.junctions = 998;
  config.arcs = 2470;
  config.routes = 4788;
  config.seed = seed;
  return config;
}

void GeneratorConfig::validate() const {
  if (!seed) throw ValidationError("generator seed is required");
  if (junctions < 2) throw ValidationError("generator needs at least 2 junctions");
  if (arcs == 0 || routes == 0) throw ValidationError("generator arc and route counts must be > 0");
  if (arcs < junctions - 1) {
    throw ValidationError("arc count " + std::to_string(arcs) + " cannot connect " +
                          std::to_string(junctions) + " junctions (need >= " +
                          std::to_string(junctions - 1) + ")");
  }
  if (arcs > junctions * (junctions - 1)) {
    throw ValidationError("arc count exceeds the number of distinct junction pairs");
  }
  if (!(max_route_length_km > 0.0)) throw ValidationError("max route length must be > 0");
  if (!(junction_spacing_km > 0.0) || !(detour_factor >= 1.0)) {
    throw ValidationError("junction spacing must be > 0 and detour factor >= 1");
  }
  if (!(speed_min_kmh > 0.0 && speed_min_kmh <= speed_max_kmh)) {
    throw ValidationError("speed range must satisfy 0 < min <= max");
  }
  if (!(flow_min >= 0.0 && flow_min <= flow_max)) {
    throw ValidationError("flow range must satisfy 0 <= min <= max");
  }
  if (!(penetration >= 0.0 && penetration <= 1.0)) {
    throw ValidationError("penetration must lie in [0, 1]");
  }
  params.validate();
  enumeration.validate();
}

namespace {

struct Point {
  double x;
  double y;
};

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

class Builder {
 public:
  explicit Builder(const GeneratorConfig& config) : config_(config), rng_(*config.seed) {}

  Scenario build() {
    place_junctions();
    connect();
    Scenario scenario;
    std::vector<JunctionId> ids(config_.junctions);
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<JunctionId>(i + 1);
    scenario.network = RoadNetwork::build(std::move(ids), arcs_);
    scenario.routes = make_routes(scenario.network);
    scenario.pairs = make_pairs(scenario.network, scenario.routes);
    scenario.params = config_.params;
    scenario.penetration = config_.penetration;
    scenario.enumeration = config_.enumeration;
    scenario.seed = config_.seed;
    return scenario;
  }

 private:
  double uniform(double lo, double hi) {
    if (lo == hi) return lo;
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  std::size_t pick(std::size_t count) {
    return std::uniform_int_distribution<std::size_t>(0, count - 1)(rng_);
  }

  void place_junctions() {
    const double side = config_.junction_spacing_km * std::sqrt(double(config_.junctions));
    points_.resize(config_.junctions);
    for (Point& p : points_) p = {uniform(0.0, side), uniform(0.0, side)};
  }

  void add_arc(std::size_t from, std::size_t to) {
    const double length = std::max(0.5, config_.detour_factor * distance(points_[from], points_[to]));
    Arc arc;
    arc.id = static_cast<ArcId>(arcs_.size() + 1);
    arc.tail = static_cast<JunctionId>(from + 1);
    arc.head = static_cast<JunctionId>(to + 1);
    arc.length = length;
    arc.delay = length / uniform(config_.speed_min_kmh, config_.speed_max_kmh);
    arc.flow = uniform(config_.flow_min, config_.flow_max);
    arcs_.push_back(arc);
    directed_.insert({from, to});
  }

  // Adds the undirected edge as two arcs when the budget allows, else one
  // arc in a random direction.
  void add_edge(std::size_t a, std::size_t b) {
    const std::size_t left = config_.arcs - arcs_.size();
    if (left == 0) return;
    if (left >= 2 + reserved_) {
      add_arc(a, b);
      add_arc(b, a);
    } else if (pick(2) == 0) {
      add_arc(a, b);
    } else {
      add_arc(b, a);
    }
  }

  void connect() {
    const std::size_t n = config_.junctions;
    std::set<std::pair<std::size_t, std::size_t>> edges;
    // Euclidean minimum spanning tree (Prim); reserve one arc for every tree
    // edge not yet placed so the tree is always completed.
    std::vector<std::pair<std::size_t, std::size_t>> tree;
    {
      std::vector<double> best(n, std::numeric_limits<double>::infinity());
      std::vector<std::size_t> link(n, 0);
      std::vector<bool> in_tree(n, false);
      in_tree[0] = true;
      for (std::size_t j = 1; j < n; ++j) best[j] = distance(points_[0], points_[j]);
      for (std::size_t step = 1; step < n; ++step) {
        std::size_t next = 0;
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
          if (!in_tree[j] && best[j] < d) {
            d = best[j];
            next = j;
          }
        }
        in_tree[next] = true;
        tree.emplace_back(link[next], next);
        edges.insert(std::minmax(link[next], next));
        for (std::size_t j = 0; j < n; ++j) {
          const double dj = distance(points_[next], points_[j]);
          if (!in_tree[j] && dj < best[j]) {
            best[j] = dj;
            link[j] = next;
          }
        }
      }
    }
    reserved_ = tree.size();
    for (const auto& [a, b] : tree) {
      --reserved_;
      add_edge(a, b);
    }

    // Extra edges between near neighbours, shortest first.
    constexpr std::size_t kNeighbours = 6;
    std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::pair<double, std::size_t>> near;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) near.emplace_back(distance(points_[i], points_[j]), j);
      }
      const std::size_t keep = std::min(kNeighbours, near.size());
      std::partial_sort(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(keep), near.end());
      for (std::size_t k = 0; k < keep; ++k) {
        const auto key = std::minmax(i, near[k].second);
        if (!edges.contains(key)) {
          edges.insert(key);
          candidates.emplace_back(near[k].first, key.first, key.second);
        }
      }
    }
    std::sort(candidates.begin(), candidates.end());
    for (const auto& [d, a, b] : candidates) {
      if (arcs_.size() >= config_.arcs) break;
      add_edge(a, b);
    }

    // Fill any remaining budget with missing directions, then random pairs.
    for (std::size_t i = 0; i < arcs_.size() && arcs_.size() < config_.arcs; ++i) {
      const std::size_t from = static_cast<std::size_t>(arcs_[i].head - 1);
      const std::size_t to = static_cast<std::size_t>(arcs_[i].tail - 1);
      if (!directed_.contains({from, to})) add_arc(from, to);
    }
    while (arcs_.size() < config_.arcs) {
      const std::size_t a = pick(n);
      const std::size_t b = pick(n);
      if (a != b && !directed_.contains({a, b})) add_arc(a, b);
    }
  }

  std::vector<VehicularRoute> make_routes(const RoadNetwork& network) {
    constexpr std::size_t kAttempts = 1000;
    std::vector<VehicularRoute> routes;
    routes.reserve(config_.routes);
    for (std::size_t r = 0; r < config_.routes; ++r) {
      VehicularRoute route;
      for (std::size_t attempt = 0; attempt < kAttempts && route.arcs.empty(); ++attempt) {
        const std::size_t from = pick(config_.junctions);
        const std::size_t to = pick(config_.junctions);
        if (from != to) route = trip(network, from, to);
      }
      if (route.arcs.empty()) {
        throw ValidationError("cannot build a route within " +
                              std::to_string(config_.max_route_length_km) + " km");
      }
      route.id = static_cast<RouteId>(r + 1);
      routes.push_back(std::move(route));
    }
    return routes;
  }

  // Shortest trip by length from `from` to `to`, cut where it would exceed
  // the route length cap. Empty when `to` is unreachable or the first arc
  // alone is too long.
  VehicularRoute trip(const RoadNetwork& network, std::size_t from, std::size_t to) {
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    const std::size_t n = config_.junctions;
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> via(n, kNone);
    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist[from] = 0.0;
    queue.emplace(0.0, from);
    while (!queue.empty()) {
      const auto [d, at] = queue.top();
      queue.pop();
      if (d > dist[at]) continue;
      if (at == to) break;
      for (std::size_t k : network.outgoing(static_cast<JunctionId>(at + 1))) {
        const Arc& arc = network.arcs()[k];
        const auto head = static_cast<std::size_t>(arc.head - 1);
        if (d + arc.length < dist[head]) {
          dist[head] = d + arc.length;
          via[head] = k;
          queue.emplace(dist[head], head);
        }
      }
    }
    VehicularRoute route;
    if (via[to] == kNone) return route;
    std::vector<std::size_t> positions;
    for (std::size_t at = to; at != from;) {
      positions.push_back(via[at]);
      at = static_cast<std::size_t>(network.arcs()[via[at]].tail - 1);
    }
    double length = 0.0;
    for (auto it = positions.rbegin(); it != positions.rend(); ++it) {
      const Arc& arc = network.arcs()[*it];
      if (length + arc.length > config_.max_route_length_km) break;
      length += arc.length;
      route.arcs.push_back(arc.id);
    }
    if (!route.arcs.empty()) {
      route.flow = network.arc(route.arcs.front()).flow;
      for (ArcId id : route.arcs) route.flow = std::min(route.flow, network.arc(id).flow);
    }
    return route;
  }

  // The target is a random junction from the busiest quarter, counting
  // routes that arrive there. Sources are taken in shuffled order,
  // preferring junctions with the full path cap K to the target, then those
  // with at least one path, then the rest.
  std::vector<SourceTargetPair> make_pairs(const RoadNetwork& network,
                                           const std::vector<VehicularRoute>& routes) {
    const std::size_t n = config_.junctions;
    std::vector<std::size_t> arrivals(n, 0);
    for (const VehicularRoute& route : routes) {
      for (ArcId id : route.arcs) ++arrivals[static_cast<std::size_t>(network.arc(id).head - 1)];
    }
    std::vector<std::size_t> busiest(n);
    std::iota(busiest.begin(), busiest.end(), std::size_t{0});
    std::stable_sort(busiest.begin(), busiest.end(),
                     [&](std::size_t a, std::size_t b) { return arrivals[a] > arrivals[b]; });
    const auto target = static_cast<JunctionId>(busiest[pick(std::max<std::size_t>(1, n / 4))] + 1);
    std::vector<JunctionId> others;
    for (std::size_t i = 0; i < n; ++i) {
      if (static_cast<JunctionId>(i + 1) != target) others.push_back(static_cast<JunctionId>(i + 1));
    }
    std::shuffle(others.begin(), others.end(), rng_);

    const RouteSet route_set(network, routes);
    EnumerationConfig probe = config_.enumeration;
    if (probe.max_paths == EnumerationConfig::kUnlimited) probe.max_paths = 1;
    std::vector<JunctionId> tiers[3];
    for (JunctionId source : others) {
      if (tiers[0].size() == config_.sources) break;
      const std::size_t found = enumerate_paths(route_set, source, target, probe).size();
      tiers[found == probe.max_paths ? 0 : found > 0 ? 1 : 2].push_back(source);
    }
    std::vector<SourceTargetPair> pairs;
    for (const auto& tier : tiers) {
      for (JunctionId source : tier) {
        if (pairs.size() == config_.sources) return pairs;
        pairs.push_back({source, target});
      }
    }
    return pairs;
  }

  const GeneratorConfig& config_;
  std::mt19937_64 rng_;
  std::vector<Point> points_;
  std::vector<Arc> arcs_;
  std::set<std::pair<std::size_t, std::size_t>> directed_;
  std::size_t reserved_ = 0;
};

}  // namespace

Scenario generate_scenario(const GeneratorConfig& config) {
  config.validate();
  Scenario scenario = Builder(config).build();
  scenario.validate();
  return scenario;
}

}  // namespace ven
