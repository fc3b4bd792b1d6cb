#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ven/energetics.hpp"
#include "ven/network.hpp"
#include "ven/path_enumeration.hpp"

namespace ven {

struct SourceTargetPair {
  JunctionId source = 0;
  JunctionId target = 0;

  bool operator==(const SourceTargetPair&) const = default;
};

struct Caps {
  std::optional<double> loss_cap;
  std::optional<double> delivery_floor;

  bool operator==(const Caps&) const = default;
};

/// Everything needed to plan energy transfers on one road network.
///
/// Route flows are stored as declared (all vehicles); the carriers are the
/// `penetration` fraction of them, see effective_routes().
struct Scenario {
  static constexpr int kSchemaVersion = 1;

  RoadNetwork network;
  std::vector<VehicularRoute> routes;
  std::vector<SourceTargetPair> pairs;
  EnergyParams params;
  double penetration = 0.001;
  EnumerationConfig enumeration;
  Caps caps;
  std::optional<std::uint64_t> seed;

  /// Routes with flow scaled to participating vehicles: flow * penetration.
  std::vector<VehicularRoute> effective_routes() const;

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;

  bool operator==(const Scenario&) const = default;
};

/// Parses and validates scenario JSON. Throws ParseError for malformed text
/// or fields of the wrong type (with line or field path) and
/// ValidationError for well-formed scenarios that break an invariant.
Scenario parse_scenario(std::string_view text);

/// Canonical JSON: fixed key order, two-space indent, trailing newline.
std::string serialize_scenario(const Scenario& scenario);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

/// Knobs for the synthetic network and route builder.
///
/// Junctions are scattered uniformly over a square whose side keeps the
/// mean spacing near `junction_spacing_km`. A Euclidean minimum spanning
/// tree keeps the network connected; remaining arcs join near neighbours.
/// Each route is the shortest trip between two random junctions, cut off
/// before it would exceed `max_route_length_km`. All pairs share one target
/// drawn from the busiest quarter of junctions; sources with K energy paths
/// to it are preferred, then sources with at least one.
struct GeneratorConfig {
  std::size_t junctions = 100;
  std::size_t arcs = 250;
  std::size_t routes = 480;
  std::size_t sources = 10;
  double max_route_length_km = 200.0;
  double junction_spacing_km = 16.0;
  double detour_factor = 1.25;
  double speed_min_kmh = 50.0;
  double speed_max_kmh = 110.0;
  double flow_min = 200.0;
  double flow_max = 4000.0;
  std::optional<std::uint64_t> seed;

  EnergyParams params;
  double penetration = 0.001;
  EnumerationConfig enumeration{4, 20, EnumerationMode::FullRoute};

  /// 100 junctions, 250 arcs, 480 routes.
  static GeneratorConfig desk_scale(std::uint64_t seed);
  /// 998 junctions, 2470 arcs, 4788 routes.
  static GeneratorConfig full_scale(std::uint64_t seed);

  /// Throws ValidationError for missing seed, zero counts, inverted ranges
  /// or arc counts that cannot connect the junctions.
  void validate() const;
};

Scenario generate_scenario(const GeneratorConfig& config);

}  // namespace ven
