#pragma once

#include <cstddef>

#include "ven/path_enumeration.hpp"

namespace ven {

/// Energy-transport parameters. Units: kWh, hours, vehicles per hour.
struct EnergyParams {
  double packet_size = 0.1;             // w, kWh carried per vehicle per cycle
  double charging_efficiency = 0.9;     // z_c
  double discharging_efficiency = 1.0;  // z_d
  double window = 5.0;                  // T, hours

  /// z = z_c * z_d, the fraction kept over one charging-discharging cycle.
  double round_trip() const { return charging_efficiency * discharging_efficiency; }

  /// Parameters whose round-trip efficiency is exactly `z` (z_c = z, z_d = 1).
  static EnergyParams with_round_trip(double z, double packet_size, double window);

  /// Throws ValidationError unless w > 0, 0 < z_c, z_d <= 1 and T >= 0.
  void validate() const;

  bool operator==(const EnergyParams&) const = default;
};

/// z^hops by repeated multiplication; every energetics routine uses this so
/// capacities, losses and injections agree to the last bit.
double retention(double z, std::size_t hops);

/// Propagation delay: sum of arc delays over every segment.
double path_delay(const EnergyPath& path);

/// Largest admissible transfer rate: w times the slowest segment flow.
double max_rate(const EnergyPath& path, const EnergyParams& params);

/// Energy deliverable within the window at rate `rate`:
/// max(0, T - d) * z^hops * rate. Throws std::invalid_argument if rate < 0.
double max_transferable(const EnergyPath& path, const EnergyParams& params, double rate);

/// Loss incurred delivering `delivered` kWh: (1/z^hops - 1) * delivered.
double path_loss(const EnergyPath& path, const EnergyParams& params, double delivered);

/// Energy injected at the source to deliver `delivered` kWh: delivered / z^hops.
double source_injection(const EnergyPath& path, const EnergyParams& params, double delivered);

/// Time to push `delivered` kWh through the path at `rate`: propagation plus
/// transmission, d + delivered / (z^hops * rate).
double transport_duration(const EnergyPath& path, const EnergyParams& params, double delivered,
                          double rate);

/// Per-path coefficients consumed by the planner.
struct PathEconomics {
  std::size_t hops = 0;
  double delay = 0.0;
  double max_rate = 0.0;
  double capacity = 0.0;
  double loss_factor = 0.0;
  double injection_multiplier = 1.0;
};

PathEconomics economics(const EnergyPath& path, const EnergyParams& params);

}  // namespace ven
