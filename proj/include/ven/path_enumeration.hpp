#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "ven/network.hpp"

namespace ven {

/// A chain of route segments that carries energy from `source` to `target`.
/// Each segment boundary is one charging-discharging cycle.
struct EnergyPath {
  JunctionId source = 0;
  JunctionId target = 0;
  std::vector<SubRoute> segments;

  std::size_t hops() const { return segments.size(); }
  /// Sum of segment delays, accumulated in segment order.
  double delay() const;
  /// Smallest segment flow; zero for an empty path.
  double bottleneck_flow() const;

  bool operator==(const EnergyPath&) const = default;
};

/// Total order used for enumeration output: hop count, then delay, then the
/// route id sequence, then segment index bounds. Delays are compared at
/// 1e-9 h resolution, so regrouped sums of the same arc delays tie.
bool path_order_less(const EnergyPath& a, const EnergyPath& b);

enum class EnumerationMode {
  /// Segments may span any contiguous part of a route; consecutive segments
  /// must come from different routes.
  FullRoute,
  /// No routing information: every segment is a single arc.
  PerHop,
};

std::string_view to_string(EnumerationMode mode);
/// Accepts "full-route" and "per-hop"; throws std::invalid_argument otherwise.
EnumerationMode parse_enumeration_mode(std::string_view text);

struct EnumerationConfig {
  static constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

  std::size_t max_hops = 4;
  std::size_t max_paths = kUnlimited;
  EnumerationMode mode = EnumerationMode::FullRoute;

  /// Throws ValidationError unless max_hops >= 1 and max_paths >= 1.
  void validate() const;

  bool operator==(const EnumerationConfig&) const = default;
};

/// Enumerates loop-free energy paths from `source` to `target`.
///
/// Paths come out in path_order_less order, so the K cap keeps the paths
/// with the fewest charging cycles. The search is best-first on
/// (hops + remaining-hop bound, delay + remaining-delay bound); both bounds
/// are computed per call by reverse searches from the target over the route
/// structure, and partial paths that cannot reach the target within
/// max_hops are never expanded. Once K paths are held, partial paths that
/// cannot beat the K-th best are dropped, including ties that already carry
/// a larger route id prefix.
///
/// Throws ValidationError for unknown junctions or source == target.
std::vector<EnergyPath> enumerate_paths(const RouteSet& routes, JunctionId source,
                                        JunctionId target, const EnumerationConfig& config);

enum class PathViolation {
  None,
  Empty,
  InvalidSegment,
  BrokenChain,
  WrongSource,
  WrongTarget,
  Loop,
};

std::string_view to_string(PathViolation violation);

struct PathCheck {
  PathViolation violation = PathViolation::None;
  std::size_t segment = 0;  // 0-based index of the offending segment
  std::string message;

  bool ok() const { return violation == PathViolation::None; }
};

/// Checks segment consistency, chaining between segments, the source and
/// target endpoints and loop-freedom, in that order, and reports the first
/// failure.
PathCheck validate_path(const EnergyPath& path, const RouteSet& routes);

}  // namespace ven
