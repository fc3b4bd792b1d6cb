#include "ven/energetics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ven/errors.hpp"

namespace ven {

EnergyParams EnergyParams::with_round_trip(double z, double packet_size, double window) {
  EnergyParams params;
  params.packet_size = packet_size;
  params.charging_efficiency = z;
  params.discharging_efficiency = 1.0;
  params.window = window;
  return params;
}

void EnergyParams::validate() const {
  if (!(std::isfinite(packet_size) && packet_size > 0.0)) {
    throw ValidationError("packet size w must be > 0");
  }
  if (!(charging_efficiency > 0.0 && charging_efficiency <= 1.0)) {
    throw ValidationError("charging efficiency z_c must lie in (0, 1]");
  }
  if (!(discharging_efficiency > 0.0 && discharging_efficiency <= 1.0)) {
    throw ValidationError("discharging efficiency z_d must lie in (0, 1]");
  }
  if (!(std::isfinite(window) && window >= 0.0)) {
    throw ValidationError("time window T must be >= 0");
  }
}

double retention(double z, std::size_t hops) {
  double out = 1.0;
  for (std::size_t i = 0; i < hops; ++i) out *= z;
  return out;
}

double path_delay(const EnergyPath& path) {
  double total = 0.0;
  for (const SubRoute& seg : path.segments) total += seg.delay;
  return total;
}

double max_rate(const EnergyPath& path, const EnergyParams& params) {
  return params.packet_size * path.bottleneck_flow();
}

double max_transferable(const EnergyPath& path, const EnergyParams& params, double rate) {
  if (rate < 0.0) throw std::invalid_argument("transfer rate must be >= 0");
  const double slack = std::max(0.0, params.window - path_delay(path));
  return slack * retention(params.round_trip(), path.hops()) * rate;
}

double path_loss(const EnergyPath& path, const EnergyParams& params, double delivered) {
  if (delivered < 0.0) throw std::invalid_argument("delivered energy must be >= 0");
  return (1.0 / retention(params.round_trip(), path.hops()) - 1.0) * delivered;
}

double source_injection(const EnergyPath& path, const EnergyParams& params, double delivered) {
  if (delivered < 0.0) throw std::invalid_argument("delivered energy must be >= 0");
  return delivered / retention(params.round_trip(), path.hops());
}

double transport_duration(const EnergyPath& path, const EnergyParams& params, double delivered,
                          double rate) {
  if (delivered < 0.0) throw std::invalid_argument("delivered energy must be >= 0");
  if (!(rate > 0.0)) throw std::invalid_argument("transfer rate must be > 0");
  return path_delay(path) + source_injection(path, params, delivered) / rate;
}

PathEconomics economics(const EnergyPath& path, const EnergyParams& params) {
  PathEconomics out;
  const double kept = retention(params.round_trip(), path.hops());
  out.hops = path.hops();
  out.delay = path_delay(path);
  out.max_rate = max_rate(path, params);
  out.capacity = max_transferable(path, params, out.max_rate);
  out.loss_factor = 1.0 / kept - 1.0;
  out.injection_multiplier = 1.0 / kept;
  return out;
}

}  // namespace ven
