#include "ven/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "ven/errors.hpp"

namespace ven {

using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kTimeUnit = "hours";
constexpr const char* kLengthUnit = "km";
constexpr const char* kEnergyUnit = "kWh";
constexpr const char* kFlowUnit = "vehicles/hour";

std::string describe(const Json& value) {
  switch (value.type()) {
    case Json::value_t::null: return "null";
    case Json::value_t::object: return "object";
    case Json::value_t::array: return "array";
    case Json::value_t::string: return "string";
    case Json::value_t::boolean: return "boolean";
    default: return "number";
  }
}

const Json& field(const Json& object, const char* key, const std::string& where) {
  if (!object.is_object()) throw ParseError(where + ": expected an object, got " + describe(object));
  auto it = object.find(key);
  if (it == object.end()) throw ParseError(where + "." + key + ": missing field");
  return *it;
}

double number(const Json& value, const std::string& where) {
  if (!value.is_number()) throw ParseError(where + ": expected a number, got " + describe(value));
  return value.get<double>();
}

std::int64_t integer(const Json& value, const std::string& where) {
  if (!value.is_number_integer()) {
    throw ParseError(where + ": expected an integer, got " + describe(value));
  }
  return value.get<std::int64_t>();
}

const Json& array(const Json& value, const std::string& where) {
  if (!value.is_array()) throw ParseError(where + ": expected an array, got " + describe(value));
  return value;
}

std::optional<double> optional_number(const Json& object, const char* key,
                                      const std::string& where) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return std::nullopt;
  return number(*it, where + "." + key);
}

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

void check_units(const Json& units) {
  const std::pair<const char*, const char*> expected[] = {
      {"time", kTimeUnit}, {"length", kLengthUnit}, {"energy", kEnergyUnit}, {"flow", kFlowUnit}};
  for (const auto& [key, unit] : expected) {
    const Json& value = field(units, key, "units");
    if (!value.is_string()) throw ParseError(std::string("units.") + key + ": expected a string");
    if (value.get<std::string>() != unit) {
      throw ValidationError(std::string("units.") + key + " must be '" + unit + "', got '" +
                            value.get<std::string>() + "'");
    }
  }
}

Arc parse_arc(const Json& node, const std::string& where) {
  Arc arc;
  arc.id = integer(field(node, "id", where), where + ".id");
  arc.tail = integer(field(node, "tail", where), where + ".tail");
  arc.head = integer(field(node, "head", where), where + ".head");
  const Json& delay = field(node, "delay", where);
  if (delay.is_array() || delay.is_object()) {
    throw ValidationError(where + ".delay: time-varying delays are not supported, "
                                  "arc delay must be a constant");
  }
  arc.delay = number(delay, where + ".delay");
  arc.flow = number(field(node, "flow", where), where + ".flow");
  auto length = node.find("length");
  arc.length = length == node.end() ? 0.0 : number(*length, where + ".length");
  return arc;
}

}  // namespace

std::vector<VehicularRoute> Scenario::effective_routes() const {
  std::vector<VehicularRoute> out = routes;
  for (VehicularRoute& route : out) route.flow = route.flow * penetration;
  return out;
}

void Scenario::validate() const {
  if (!(penetration >= 0.0 && penetration <= 1.0)) {
    throw ValidationError("penetration must lie in [0, 1], got " + std::to_string(penetration));
  }
  params.validate();
  enumeration.validate();
  RouteSet checked(network, routes);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const SourceTargetPair& p = pairs[i];
    const std::string where = "pair " + std::to_string(i + 1);
    if (!network.has_junction(p.source)) {
      throw ValidationError(where + " has unknown source junction " + std::to_string(p.source));
    }
    if (!network.has_junction(p.target)) {
      throw ValidationError(where + " has unknown target junction " + std::to_string(p.target));
    }
    if (p.source == p.target) throw ValidationError(where + " has source equal to target");
  }
  if (caps.loss_cap && !(*caps.loss_cap >= 0.0)) throw ValidationError("loss cap must be >= 0");
  if (caps.delivery_floor && !(*caps.delivery_floor >= 0.0 && std::isfinite(*caps.delivery_floor))) {
    throw ValidationError("delivery floor must be finite and >= 0");
  }
}

Scenario parse_scenario(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line =
        1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + end, '\n'));
    std::string what = e.what();
    if (auto colon = what.find("parse error"); colon != std::string::npos) what = what.substr(colon);
    throw ParseError(what, line);
  }
  if (!root.is_object()) throw ParseError("scenario must be a JSON object");

  const std::int64_t version = integer(field(root, "schema_version", "scenario"), "schema_version");
  if (version != Scenario::kSchemaVersion) {
    throw ValidationError("unsupported schema_version " + std::to_string(version));
  }
  check_units(field(root, "units", "scenario"));

  Scenario scenario;
  std::vector<JunctionId> junctions;
  const Json& jlist = array(field(root, "junctions", "scenario"), "junctions");
  for (std::size_t i = 0; i < jlist.size(); ++i) {
    junctions.push_back(integer(jlist[i], index_path("junctions", i)));
  }
  std::vector<Arc> arcs;
  const Json& alist = array(field(root, "arcs", "scenario"), "arcs");
  for (std::size_t i = 0; i < alist.size(); ++i) arcs.push_back(parse_arc(alist[i], index_path("arcs", i)));
  scenario.network = RoadNetwork::build(std::move(junctions), std::move(arcs));

  const Json& rlist = array(field(root, "routes", "scenario"), "routes");
  for (std::size_t i = 0; i < rlist.size(); ++i) {
    const std::string where = index_path("routes", i);
    VehicularRoute route;
    route.id = integer(field(rlist[i], "id", where), where + ".id");
    const Json& ids = array(field(rlist[i], "arcs", where), where + ".arcs");
    for (std::size_t k = 0; k < ids.size(); ++k) {
      route.arcs.push_back(integer(ids[k], index_path(where + ".arcs", k)));
    }
    route.flow = number(field(rlist[i], "flow", where), where + ".flow");
    scenario.routes.push_back(std::move(route));
  }

  const Json& plist = array(field(root, "pairs", "scenario"), "pairs");
  for (std::size_t i = 0; i < plist.size(); ++i) {
    const std::string where = index_path("pairs", i);
    scenario.pairs.push_back({integer(field(plist[i], "source", where), where + ".source"),
                              integer(field(plist[i], "target", where), where + ".target")});
  }

  const Json& params = field(root, "params", "scenario");
  scenario.params.packet_size = number(field(params, "packet_size", "params"), "params.packet_size");
  scenario.params.charging_efficiency =
      number(field(params, "charging_efficiency", "params"), "params.charging_efficiency");
  scenario.params.discharging_efficiency =
      number(field(params, "discharging_efficiency", "params"), "params.discharging_efficiency");
  scenario.params.window = number(field(params, "window", "params"), "params.window");

  scenario.penetration = number(field(root, "penetration", "scenario"), "penetration");

  if (auto it = root.find("enumeration"); it != root.end()) {
    const Json& e = *it;
    if (auto h = e.find("max_hops"); h != e.end()) {
      const std::int64_t hops = integer(*h, "enumeration.max_hops");
      if (hops < 1) throw ValidationError("enumeration.max_hops must be >= 1");
      scenario.enumeration.max_hops = static_cast<std::size_t>(hops);
    }
    if (auto k = e.find("max_paths"); k != e.end() && !k->is_null()) {
      const std::int64_t paths = integer(*k, "enumeration.max_paths");
      if (paths < 1) throw ValidationError("enumeration.max_paths must be >= 1");
      scenario.enumeration.max_paths = static_cast<std::size_t>(paths);
    }
    if (auto m = e.find("mode"); m != e.end()) {
      if (!m->is_string()) throw ParseError("enumeration.mode: expected a string");
      try {
        scenario.enumeration.mode = parse_enumeration_mode(m->get<std::string>());
      } catch (const std::invalid_argument& err) {
        throw ValidationError(std::string("enumeration.mode: ") + err.what());
      }
    }
  }

  if (auto it = root.find("caps"); it != root.end() && !it->is_null()) {
    scenario.caps.loss_cap = optional_number(*it, "loss_cap", "caps");
    scenario.caps.delivery_floor = optional_number(*it, "delivery_floor", "caps");
  }
  if (auto it = root.find("seed"); it != root.end() && !it->is_null()) {
    if (!it->is_number_unsigned()) throw ParseError("seed: expected a nonnegative integer");
    scenario.seed = it->get<std::uint64_t>();
  }

  scenario.validate();
  return scenario;
}

std::string serialize_scenario(const Scenario& scenario) {
  Json root;
  root["schema_version"] = Scenario::kSchemaVersion;
  root["units"] = {{"time", kTimeUnit},
                   {"length", kLengthUnit},
                   {"energy", kEnergyUnit},
                   {"flow", kFlowUnit}};
  root["seed"] = scenario.seed ? Json(*scenario.seed) : Json(nullptr);
  root["junctions"] = Json::array();
  for (JunctionId j : scenario.network.junctions()) root["junctions"].push_back(j);
  root["arcs"] = Json::array();
  for (const Arc& a : scenario.network.arcs()) {
    root["arcs"].push_back({{"id", a.id},
                            {"tail", a.tail},
                            {"head", a.head},
                            {"delay", a.delay},
                            {"flow", a.flow},
                            {"length", a.length}});
  }
  root["routes"] = Json::array();
  for (const VehicularRoute& r : scenario.routes) {
    root["routes"].push_back({{"id", r.id}, {"arcs", r.arcs}, {"flow", r.flow}});
  }
  root["pairs"] = Json::array();
  for (const SourceTargetPair& p : scenario.pairs) {
    root["pairs"].push_back({{"source", p.source}, {"target", p.target}});
  }
  root["params"] = {{"packet_size", scenario.params.packet_size},
                    {"charging_efficiency", scenario.params.charging_efficiency},
                    {"discharging_efficiency", scenario.params.discharging_efficiency},
                    {"window", scenario.params.window}};
  root["penetration"] = scenario.penetration;
  const EnumerationConfig& e = scenario.enumeration;
  root["enumeration"] = {
      {"max_hops", e.max_hops},
      {"max_paths",
       e.max_paths == EnumerationConfig::kUnlimited ? Json(nullptr) : Json(e.max_paths)},
      {"mode", std::string(to_string(e.mode))}};
  root["caps"] = {
      {"loss_cap", scenario.caps.loss_cap ? Json(*scenario.caps.loss_cap) : Json(nullptr)},
      {"delivery_floor",
       scenario.caps.delivery_floor ? Json(*scenario.caps.delivery_floor) : Json(nullptr)}};
  return root.dump(2) + "\n";
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write scenario file " + path.string());
  out << serialize_scenario(scenario);
}

}  // namespace ven
