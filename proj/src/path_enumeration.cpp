#include "ven/path_enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "ven/errors.hpp"

namespace ven {

double EnergyPath::delay() const {
  double total = 0.0;
  for (const SubRoute& seg : segments) total += seg.delay;
  return total;
}

double EnergyPath::bottleneck_flow() const {
  if (segments.empty()) return 0.0;
  double flow = segments.front().flow;
  for (const SubRoute& seg : segments) flow = std::min(flow, seg.flow);
  return flow;
}

namespace {

// Delays are ranked at 1e-9 h resolution so that the same arc delays summed
// in a different grouping still tie.
std::int64_t delay_rank(double delay) { return std::llround(delay * 1e9); }

}  // namespace

bool path_order_less(const EnergyPath& a, const EnergyPath& b) {
  if (a.hops() != b.hops()) return a.hops() < b.hops();
  const std::int64_t da = delay_rank(a.delay());
  const std::int64_t db = delay_rank(b.delay());
  if (da != db) return da < db;
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    if (a.segments[i].route != b.segments[i].route) {
      return a.segments[i].route < b.segments[i].route;
    }
  }
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    const auto ka = std::tie(a.segments[i].first, a.segments[i].last);
    const auto kb = std::tie(b.segments[i].first, b.segments[i].last);
    if (ka != kb) return ka < kb;
  }
  return false;
}

std::string_view to_string(EnumerationMode mode) {
  return mode == EnumerationMode::FullRoute ? "full-route" : "per-hop";
}

EnumerationMode parse_enumeration_mode(std::string_view text) {
  if (text == "full-route") return EnumerationMode::FullRoute;
  if (text == "per-hop") return EnumerationMode::PerHop;
  throw std::invalid_argument("unknown enumeration mode '" + std::string(text) +
                              "' (expected full-route or per-hop)");
}

void EnumerationConfig::validate() const {
  if (max_hops < 1) throw ValidationError("enumeration max_hops must be >= 1");
  if (max_paths < 1) throw ValidationError("enumeration max_paths must be >= 1");
}

namespace {

constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kNoRoute = std::numeric_limits<std::size_t>::max();

// Lower bounds on the remaining hop count and remaining delay from each
// junction to the target. The hop bound is consistent for every segment
// v -> u; the delay bound is consistent for segments with
// hops(v) = hops(u) + 1, the only ones that keep the search key's hop part.
struct TargetBounds {
  std::unordered_map<JunctionId, std::size_t> hops;
  std::unordered_map<JunctionId, double> delay;

  std::size_t hops_from(JunctionId j) const {
    auto it = hops.find(j);
    return it == hops.end() ? kUnreachable : it->second;
  }
  double delay_from(JunctionId j) const {
    auto it = delay.find(j);
    return it == delay.end() ? 0.0 : it->second;
  }
};

TargetBounds compute_bounds(const RouteSet& routes, JunctionId target, EnumerationMode mode,
                            std::size_t max_hops) {
  TargetBounds bounds;

  // Arrivals: every (route, position > 0) at which a junction is reached.
  std::unordered_map<JunctionId, std::vector<RouteSet::Stop>> arrivals;
  for (std::size_t r = 0; r < routes.size(); ++r) {
    auto js = routes.junctions(r);
    for (std::size_t p = 1; p < js.size(); ++p) arrivals[js[p]].push_back({r, p});
  }

  std::deque<JunctionId> queue{target};
  bounds.hops[target] = 0;
  std::vector<std::size_t> scanned(routes.size(), 0);
  while (!queue.empty()) {
    const JunctionId u = queue.front();
    queue.pop_front();
    const std::size_t next = bounds.hops[u] + 1;
    auto it = arrivals.find(u);
    if (it == arrivals.end()) continue;
    for (const RouteSet::Stop& stop : it->second) {
      auto js = routes.junctions(stop.route);
      // Full-route: any earlier junction of the route reaches u in one segment.
      // Per-hop: only the immediate predecessor does.
      const std::size_t begin =
          mode == EnumerationMode::PerHop ? stop.position - 1 : scanned[stop.route];
      if (mode == EnumerationMode::FullRoute) {
        scanned[stop.route] = std::max(scanned[stop.route], stop.position);
      }
      for (std::size_t q = begin; q < stop.position; ++q) {
        if (bounds.hops.emplace(js[q], next).second) queue.push_back(js[q]);
      }
    }
  }

  // Delay bound: the fastest way to the target using exactly the minimum
  // number of remaining segments, by layers of one segment each. Loops and
  // the same-route rule are ignored, so this stays a lower bound; the small
  // relative margin absorbs rounding from summing in a different order.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::unordered_map<JunctionId, double> layer{{target, 0.0}};
  bounds.delay[target] = 0.0;
  const auto at = [](const std::unordered_map<JunctionId, double>& m, JunctionId j) {
    auto it = m.find(j);
    return it == m.end() ? kInf : it->second;
  };
  for (std::size_t k = 1; k <= max_hops; ++k) {
    std::unordered_map<JunctionId, double> next = layer;
    for (std::size_t r = 0; r < routes.size(); ++r) {
      auto js = routes.junctions(r);
      auto ds = routes.delays(r);
      double best = kInf;
      for (std::size_t p = ds.size(); p-- > 0;) {
        const double alight_next = at(layer, js[p + 1]);
        best = ds[p] + (mode == EnumerationMode::PerHop ? alight_next : std::min(best, alight_next));
        if (best < at(next, js[p])) next[js[p]] = best;
      }
    }
    layer = std::move(next);
    for (const auto& [j, d] : layer) {
      if (bounds.hops_from(j) == k) bounds.delay[j] = d * (1.0 - 1e-12);
    }
  }
  return bounds;
}

struct SearchNode {
  std::size_t parent;
  std::size_t route;  // kNoRoute for the root
  std::size_t first;  // 0-based arc positions, inclusive
  std::size_t last;
  JunctionId at;
  std::size_t hops;
  double delay;
};

struct QueueEntry {
  std::size_t hop_key;
  std::int64_t delay_key;  // delay_rank of delay + bound
  bool complete;
  std::size_t hops;
  std::uint64_t order;
  std::size_t node;
};

// Smallest key first. Within a key, complete paths and then deeper partial
// paths come first, so plateaus of equal keys are searched depth-first.
struct EntryAfter {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.hop_key != b.hop_key) return a.hop_key > b.hop_key;
    if (a.delay_key != b.delay_key) return a.delay_key > b.delay_key;
    if (a.complete != b.complete) return b.complete;
    if (a.hops != b.hops) return a.hops < b.hops;
    return a.order > b.order;
  }
};

class PathSearch {
 public:
  PathSearch(const RouteSet& routes, JunctionId source, JunctionId target,
             const EnumerationConfig& config)
      : routes_(routes),
        target_(target),
        config_(config),
        bounds_(compute_bounds(routes, target, config.mode, config.max_hops)) {
    nodes_.push_back(SearchNode{kNoRoute, kNoRoute, 0, 0, source, 0, 0.0});
  }

  std::vector<EnergyPath> run() {
    const std::size_t root_bound = bounds_.hops_from(nodes_[0].at);
    if (root_bound == kUnreachable || root_bound > config_.max_hops) return {};
    push(0, root_bound, bounds_.delay_from(nodes_[0].at), false);

    // Entries leave the queue in nondecreasing key order, so once the head
    // ranks past the K-th best path found so far nothing left can beat it.
    while (!queue_.empty()) {
      const QueueEntry entry = queue_.top();
      if (beyond(entry.hop_key, entry.delay_key)) break;
      queue_.pop();
      if (loses_tie(entry.node, entry.hop_key, entry.delay_key)) continue;
      if (entry.complete) {
        offer(entry.node);
      } else {
        expand(entry.node);
      }
    }

    std::vector<EnergyPath> paths;
    paths.reserve(best_.size());
    for (std::size_t node : best_) paths.push_back(materialize(node));
    std::sort(paths.begin(), paths.end(), path_order_less);
    return paths;
  }

 private:
  void push(std::size_t node, std::size_t hop_key, double delay_key, bool complete) {
    queue_.push(
        QueueEntry{hop_key, delay_rank(delay_key), complete, nodes_[node].hops, counter_++, node});
  }

  // Push a new child unless it cannot reach the current top K.
  void offer_child(std::size_t parent, std::size_t route, std::size_t first, std::size_t last,
                   JunctionId at, std::size_t hops, double delay, std::size_t hop_key,
                   double delay_key, bool complete) {
    const std::int64_t rank = delay_rank(delay_key);
    if (beyond(hop_key, rank)) return;
    const std::size_t node = add_node(parent, route, first, last, at, hops, delay);
    if (loses_tie(node, hop_key, rank)) {
      nodes_.pop_back();
      return;
    }
    push(node, hop_key, delay_key, complete);
  }

  bool full() const { return best_.size() >= config_.max_paths; }

  const SearchNode& kth() const { return nodes_[best_.front()]; }

  bool beyond(std::size_t hop_key, std::int64_t delay_key) const {
    if (!full()) return false;
    const SearchNode& k = kth();
    if (hop_key != k.hops) return hop_key > k.hops;
    return delay_key > delay_rank(k.delay);
  }

  // True when every completion of `node` ties the K-th best on hops and
  // delay at best and already has a larger route id sequence.
  bool loses_tie(std::size_t node, std::size_t hop_key, std::int64_t delay_key) const {
    if (!full()) return false;
    const SearchNode& k = kth();
    if (hop_key != k.hops || delay_key != delay_rank(k.delay)) return false;
    const auto mine = chain(node);
    const auto theirs = chain(best_.front());
    for (std::size_t i = 0; i < mine.size(); ++i) {
      const RouteId a = route_id(mine[i]);
      const RouteId b = route_id(theirs[i]);
      if (a != b) return a > b;
    }
    return false;
  }

  // Keep the K best complete paths in a max-heap, worst on top.
  void offer(std::size_t node) {
    const auto worse = [this](std::size_t a, std::size_t b) { return node_less(a, b); };
    if (!full()) {
      best_.push_back(node);
      std::push_heap(best_.begin(), best_.end(), worse);
    } else if (node_less(node, best_.front())) {
      std::pop_heap(best_.begin(), best_.end(), worse);
      best_.back() = node;
      std::push_heap(best_.begin(), best_.end(), worse);
    }
  }

  RouteId route_id(std::size_t node) const { return routes_.routes()[nodes_[node].route].id; }

  // Segment nodes from the first segment to `node`.
  std::vector<std::size_t> chain(std::size_t node) const {
    std::vector<std::size_t> out;
    for (std::size_t n = node; nodes_[n].route != kNoRoute; n = nodes_[n].parent) out.push_back(n);
    std::reverse(out.begin(), out.end());
    return out;
  }

  // path_order_less on complete search nodes.
  bool node_less(std::size_t a, std::size_t b) const {
    const SearchNode& na = nodes_[a];
    const SearchNode& nb = nodes_[b];
    if (na.hops != nb.hops) return na.hops < nb.hops;
    const std::int64_t da = delay_rank(na.delay);
    const std::int64_t db = delay_rank(nb.delay);
    if (da != db) return da < db;
    const auto ca = chain(a);
    const auto cb = chain(b);
    for (std::size_t i = 0; i < ca.size(); ++i) {
      if (route_id(ca[i]) != route_id(cb[i])) return route_id(ca[i]) < route_id(cb[i]);
    }
    for (std::size_t i = 0; i < ca.size(); ++i) {
      const auto ka = std::tie(nodes_[ca[i]].first, nodes_[ca[i]].last);
      const auto kb = std::tie(nodes_[cb[i]].first, nodes_[cb[i]].last);
      if (ka != kb) return ka < kb;
    }
    return false;
  }

  std::vector<JunctionId> visited(std::size_t node) const {
    std::vector<JunctionId> out;
    for (std::size_t n = node; n != kNoRoute; n = nodes_[n].parent) {
      const SearchNode& sn = nodes_[n];
      if (sn.route == kNoRoute) {
        out.push_back(sn.at);
        continue;
      }
      auto js = routes_.junctions(sn.route);
      for (std::size_t k = sn.first; k <= sn.last + 1; ++k) out.push_back(js[k]);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  void expand(std::size_t index) {
    const SearchNode node = nodes_[index];
    const std::vector<JunctionId> seen = visited(index);
    const std::size_t hops = node.hops + 1;
    const bool per_hop = config_.mode == EnumerationMode::PerHop;

    for (const RouteSet::Stop& stop : routes_.departures(node.at)) {
      if (!per_hop && stop.route == node.route) continue;
      auto js = routes_.junctions(stop.route);
      auto ds = routes_.delays(stop.route);
      double segment_delay = 0.0;
      for (std::size_t m = stop.position; m < ds.size(); ++m) {
        segment_delay += ds[m];
        const JunctionId exit = js[m + 1];
        if (std::binary_search(seen.begin(), seen.end(), exit)) break;
        const double delay = node.delay + segment_delay;
        if (exit == target_) {
          offer_child(index, stop.route, stop.position, m, exit, hops, delay, hops, delay, true);
          break;
        }
        if (hops < config_.max_hops) {
          const std::size_t remaining = bounds_.hops_from(exit);
          if (remaining != kUnreachable && hops + remaining <= config_.max_hops) {
            offer_child(index, stop.route, stop.position, m, exit, hops, delay, hops + remaining,
                        delay + bounds_.delay_from(exit), false);
          }
        }
        if (per_hop) break;
      }
    }
  }

  std::size_t add_node(std::size_t parent, std::size_t route, std::size_t first, std::size_t last,
                       JunctionId at, std::size_t hops, double delay) {
    nodes_.push_back(SearchNode{parent, route, first, last, at, hops, delay});
    return nodes_.size() - 1;
  }

  EnergyPath materialize(std::size_t node) const {
    EnergyPath path;
    path.target = target_;
    for (std::size_t n = node; n != kNoRoute; n = nodes_[n].parent) {
      const SearchNode& sn = nodes_[n];
      if (sn.route == kNoRoute) {
        path.source = sn.at;
        continue;
      }
      path.segments.push_back(routes_.segment(sn.route, sn.first + 1, sn.last + 1));
    }
    std::reverse(path.segments.begin(), path.segments.end());
    return path;
  }

  const RouteSet& routes_;
  JunctionId target_;
  EnumerationConfig config_;
  TargetBounds bounds_;
  std::vector<SearchNode> nodes_;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, EntryAfter> queue_;
  std::vector<std::size_t> best_;
  std::uint64_t counter_ = 0;
};

}  // namespace

std::vector<EnergyPath> enumerate_paths(const RouteSet& routes, JunctionId source,
                                        JunctionId target, const EnumerationConfig& config) {
  config.validate();
  const RoadNetwork& network = routes.network();
  if (!network.has_junction(source)) {
    throw ValidationError("unknown source junction " + std::to_string(source));
  }
  if (!network.has_junction(target)) {
    throw ValidationError("unknown target junction " + std::to_string(target));
  }
  if (source == target) {
    throw ValidationError("source and target are the same junction " + std::to_string(source));
  }
  return PathSearch(routes, source, target, config).run();
}

std::string_view to_string(PathViolation violation) {
  switch (violation) {
    case PathViolation::None: return "ok";
    case PathViolation::Empty: return "empty path";
    case PathViolation::InvalidSegment: return "invalid segment";
    case PathViolation::BrokenChain: return "condition (iii): segments not chained";
    case PathViolation::WrongSource: return "condition (i): first segment does not start at source";
    case PathViolation::WrongTarget: return "condition (ii): last segment does not end at target";
    case PathViolation::Loop: return "path revisits a junction";
  }
  return "unknown";
}

namespace {

PathCheck violation(PathViolation kind, std::size_t segment, std::string detail) {
  PathCheck check;
  check.violation = kind;
  check.segment = segment;
  check.message = std::string(to_string(kind)) + " at segment " + std::to_string(segment + 1) +
                  (detail.empty() ? "" : ": " + detail);
  return check;
}

}  // namespace

PathCheck validate_path(const EnergyPath& path, const RouteSet& routes) {
  if (path.segments.empty()) return violation(PathViolation::Empty, 0, "");

  for (std::size_t i = 0; i < path.segments.size(); ++i) {
    const SubRoute& seg = path.segments[i];
    if (!routes.contains(seg.route)) {
      return violation(PathViolation::InvalidSegment, i,
                       "unknown route " + std::to_string(seg.route));
    }
    const std::size_t r = routes.position_of(seg.route);
    const std::size_t len = routes.routes()[r].arcs.size();
    if (seg.first < 1 || seg.first > seg.last || seg.last > len) {
      return violation(PathViolation::InvalidSegment, i, "indices outside route");
    }
    auto js = routes.junctions(r);
    if (js[seg.first - 1] != seg.entry || js[seg.last] != seg.exit) {
      return violation(PathViolation::InvalidSegment, i,
                       "endpoints disagree with route " + std::to_string(seg.route));
    }
  }
  for (std::size_t i = 0; i + 1 < path.segments.size(); ++i) {
    if (path.segments[i].exit != path.segments[i + 1].entry) {
      return violation(PathViolation::BrokenChain, i,
                       "exit " + std::to_string(path.segments[i].exit) + " != entry " +
                           std::to_string(path.segments[i + 1].entry));
    }
  }
  if (path.segments.front().entry != path.source) {
    return violation(PathViolation::WrongSource, 0,
                     "entry " + std::to_string(path.segments.front().entry) + " != source " +
                         std::to_string(path.source));
  }
  if (path.segments.back().exit != path.target) {
    return violation(PathViolation::WrongTarget, path.segments.size() - 1,
                     "exit " + std::to_string(path.segments.back().exit) + " != target " +
                         std::to_string(path.target));
  }

  std::unordered_set<JunctionId> seen{path.source};
  for (std::size_t i = 0; i < path.segments.size(); ++i) {
    const SubRoute& seg = path.segments[i];
    auto js = routes.junctions(routes.position_of(seg.route));
    for (std::size_t k = seg.first; k <= seg.last; ++k) {
      if (!seen.insert(js[k]).second) {
        return violation(PathViolation::Loop, i, "junction " + std::to_string(js[k]));
      }
    }
  }
  return PathCheck{};
}

}  // namespace ven
