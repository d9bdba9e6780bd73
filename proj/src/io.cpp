#include "sftm/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sftm/errors.hpp"

namespace sftm {

namespace {

using nlohmann::json;

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw ParseError(where + ": " + msg);
}

void expect_object(const json& v, const std::string& where) {
  if (!v.is_object()) fail(where, "expected an object");
}

void expect_array(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array");
}

// Unknown fields are rejected rather than ignored so typos surface
// immediately instead of silently dropping a constraint.
void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* name : allowed)
      if (key == name) ok = true;
    if (!ok) fail(where, "unknown field '" + key + "'");
  }
}

const json* opt_field(const json& obj, const char* name) {
  auto it = obj.find(name);
  return it == obj.end() ? nullptr : &*it;
}

const json& req_field(const json& obj, const std::string& where, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) fail(where, "missing field '" + std::string(name) + "'");
  return *it;
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a string");
  return v.get<std::string>();
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<int>();
}

std::uint64_t as_uint64(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    fail(where, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

CapacityUnits parse_capacity(const json& v, const std::string& where) {
  if (v.is_string()) {
    const std::string s = lowercase(v.get<std::string>());
    if (s == "big") return CapacityUnits::big();
    if (s == "small") return CapacityUnits::small();
    fail(where, "expected \"big\", \"small\" or a non-negative integer");
  }
  int units = as_int(v, where);
  if (units < 0) fail(where, "capacity units must be non-negative");
  return CapacityUnits{units};
}

SpeedUnits parse_speed(const json& v, const std::string& where) {
  if (v.is_string()) {
    const std::string s = lowercase(v.get<std::string>());
    if (s == "fast") return SpeedUnits::fast();
    if (s == "slow") return SpeedUnits::slow();
    fail(where, "expected \"fast\", \"slow\" or a positive integer");
  }
  int units = as_int(v, where);
  if (units < 1) fail(where, "speed units must be positive");
  return SpeedUnits{units};
}

json encode_capacity(CapacityUnits c) {
  if (c == CapacityUnits::big()) return "big";
  if (c == CapacityUnits::small()) return "small";
  return c.units;
}

json encode_speed(SpeedUnits s) {
  if (s == SpeedUnits::fast()) return "fast";
  if (s == SpeedUnits::slow()) return "slow";
  return s.units;
}

std::vector<std::string> parse_string_array(const json& v, const std::string& where) {
  expect_array(v, where);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_string(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

json parse_document(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports a byte offset; rewrite it as line:column.
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string detail = e.what();
    if (auto pos = detail.find("] "); pos != std::string::npos) detail = detail.substr(pos + 2);
    throw ParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                     detail);
  }
}

Mapping parse_mapping_object(const json& doc, const std::string& where) {
  expect_object(doc, where);
  check_keys(doc, where, {"placements", "reserved_paths", "forwarding"});

  Mapping mapping;
  const json& placements = req_field(doc, where, "placements");
  expect_object(placements, where + ".placements");
  for (const auto& [m, d] : placements.items())
    mapping.placements[m] = as_string(d, where + ".placements." + m);

  if (const json* arr = opt_field(doc, "reserved_paths")) {
    expect_array(*arr, where + ".reserved_paths");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const std::string ctx = where + ".reserved_paths[" + std::to_string(i) + "]";
      const json& item = (*arr)[i];
      expect_object(item, ctx);
      check_keys(item, ctx, {"from", "to", "required_speed", "path"});
      ReservedPath rp;
      rp.from = as_string(req_field(item, ctx, "from"), ctx + ".from");
      rp.to = as_string(req_field(item, ctx, "to"), ctx + ".to");
      rp.required_speed = parse_speed(req_field(item, ctx, "required_speed"), ctx + ".required_speed");
      for (auto& dev : parse_string_array(req_field(item, ctx, "path"), ctx + ".path"))
        rp.path.push_back(std::move(dev));
      mapping.reserved_paths.push_back(std::move(rp));
    }
  }

  if (const json* arr = opt_field(doc, "forwarding")) {
    expect_array(*arr, where + ".forwarding");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const std::string ctx = where + ".forwarding[" + std::to_string(i) + "]";
      const json& item = (*arr)[i];
      expect_object(item, ctx);
      check_keys(item, ctx,
                 {"microservice", "selected_sensor_device", "host", "required_speed", "path"});
      ForwardingRecord fw;
      fw.microservice = as_string(req_field(item, ctx, "microservice"), ctx + ".microservice");
      fw.selected_sensor_device = as_string(req_field(item, ctx, "selected_sensor_device"),
                                            ctx + ".selected_sensor_device");
      fw.host = as_string(req_field(item, ctx, "host"), ctx + ".host");
      fw.required_speed =
          parse_speed(req_field(item, ctx, "required_speed"), ctx + ".required_speed");
      for (auto& dev : parse_string_array(req_field(item, ctx, "path"), ctx + ".path"))
        fw.path.push_back(std::move(dev));
      mapping.forwarding.push_back(std::move(fw));
    }
  }

  return mapping;
}

json encode_mapping_object(const Mapping& mapping) {
  json doc;
  doc["placements"] = json::object();
  for (const auto& [m, d] : mapping.placements) doc["placements"][m] = d;
  doc["reserved_paths"] = json::array();
  for (const auto& rp : mapping.reserved_paths) {
    json item;
    item["from"] = rp.from;
    item["to"] = rp.to;
    item["required_speed"] = encode_speed(rp.required_speed);
    item["path"] = rp.path;
    doc["reserved_paths"].push_back(std::move(item));
  }
  doc["forwarding"] = json::array();
  for (const auto& fw : mapping.forwarding) {
    json item;
    item["microservice"] = fw.microservice;
    item["selected_sensor_device"] = fw.selected_sensor_device;
    item["host"] = fw.host;
    item["required_speed"] = encode_speed(fw.required_speed);
    item["path"] = fw.path;
    doc["forwarding"].push_back(std::move(item));
  }
  return doc;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << text;
}

} // namespace

Scenario scenario_from_json_text(const std::string& text, const std::string& origin) {
  const json doc = parse_document(text, origin);
  expect_object(doc, origin);
  check_keys(doc, origin,
             {"name", "notes", "sensors", "devices", "links", "sft", "config",
              "reference_mapping"});

  Scenario scenario;
  if (const json* v = opt_field(doc, "name")) scenario.name = as_string(*v, origin + ".name");
  if (const json* v = opt_field(doc, "notes")) scenario.notes = as_string(*v, origin + ".notes");

  const json& sensors = req_field(doc, origin, "sensors");
  expect_array(sensors, origin + ".sensors");
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const std::string ctx = origin + ".sensors[" + std::to_string(i) + "]";
    const json& item = sensors[i];
    expect_object(item, ctx);
    check_keys(item, ctx, {"id", "modality", "roi"});
    Sensor s;
    s.id = as_string(req_field(item, ctx, "id"), ctx + ".id");
    s.modality = as_string(req_field(item, ctx, "modality"), ctx + ".modality");
    if (const json* v = opt_field(item, "roi")) s.roi = as_string(*v, ctx + ".roi");
    scenario.sensors.push_back(std::move(s));
  }
  std::sort(scenario.sensors.begin(), scenario.sensors.end(),
            [](const Sensor& x, const Sensor& y) { return x.id < y.id; });

  std::vector<FogDevice> devices;
  const json& devs = req_field(doc, origin, "devices");
  expect_array(devs, origin + ".devices");
  for (std::size_t i = 0; i < devs.size(); ++i) {
    const std::string ctx = origin + ".devices[" + std::to_string(i) + "]";
    const json& item = devs[i];
    expect_object(item, ctx);
    check_keys(item, ctx, {"id", "capacity", "sensors_in_range"});
    FogDevice d;
    d.id = as_string(req_field(item, ctx, "id"), ctx + ".id");
    d.capacity = parse_capacity(req_field(item, ctx, "capacity"), ctx + ".capacity");
    if (const json* v = opt_field(item, "sensors_in_range"))
      for (auto& sid : parse_string_array(*v, ctx + ".sensors_in_range"))
        d.sensors_in_range.insert(std::move(sid));
    devices.push_back(std::move(d));
  }

  std::vector<PhysicalLink> links;
  if (const json* arr = opt_field(doc, "links")) {
    expect_array(*arr, origin + ".links");
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const std::string ctx = origin + ".links[" + std::to_string(i) + "]";
      const json& item = (*arr)[i];
      expect_object(item, ctx);
      check_keys(item, ctx, {"endpoints", "capacity"});
      auto ends = parse_string_array(req_field(item, ctx, "endpoints"), ctx + ".endpoints");
      if (ends.size() != 2) fail(ctx + ".endpoints", "expected exactly two device ids");
      PhysicalLink l;
      l.key = LinkKey(std::move(ends[0]), std::move(ends[1]));
      l.capacity = parse_speed(req_field(item, ctx, "capacity"), ctx + ".capacity");
      links.push_back(std::move(l));
    }
  }

  const json& sft = req_field(doc, origin, "sft");
  expect_object(sft, origin + ".sft");
  check_keys(sft, origin + ".sft", {"nodes", "edges"});

  std::vector<Microservice> nodes;
  const json& jn = req_field(sft, origin + ".sft", "nodes");
  expect_array(jn, origin + ".sft.nodes");
  for (std::size_t i = 0; i < jn.size(); ++i) {
    const std::string ctx = origin + ".sft.nodes[" + std::to_string(i) + "]";
    const json& item = jn[i];
    expect_object(item, ctx);
    check_keys(item, ctx,
               {"id", "kind", "required_capacity", "required_modality", "eligible_sensors",
                "required_sensor_count"});
    Microservice m;
    m.id = as_string(req_field(item, ctx, "id"), ctx + ".id");
    const std::string kind = lowercase(as_string(req_field(item, ctx, "kind"), ctx + ".kind"));
    if (kind == "filter") {
      m.kind = MicroserviceKind::Filter;
    } else if (kind == "aggregator") {
      m.kind = MicroserviceKind::Aggregator;
    } else if (kind == "event_handler") {
      m.kind = MicroserviceKind::EventHandler;
    } else {
      fail(ctx + ".kind", "expected \"filter\", \"aggregator\" or \"event_handler\"");
    }
    m.required_capacity =
        parse_capacity(req_field(item, ctx, "required_capacity"), ctx + ".required_capacity");
    if (const json* v = opt_field(item, "required_modality"))
      m.required_modality = as_string(*v, ctx + ".required_modality");
    if (const json* v = opt_field(item, "eligible_sensors"))
      for (auto& sid : parse_string_array(*v, ctx + ".eligible_sensors"))
        m.eligible_sensors.insert(std::move(sid));
    if (const json* v = opt_field(item, "required_sensor_count")) {
      m.required_sensor_count = as_int(*v, ctx + ".required_sensor_count");
      if (m.required_sensor_count < 0)
        fail(ctx + ".required_sensor_count", "expected a non-negative integer");
    }
    nodes.push_back(std::move(m));
  }

  std::vector<SftEdge> edges;
  const json& je = req_field(sft, origin + ".sft", "edges");
  expect_array(je, origin + ".sft.edges");
  for (std::size_t i = 0; i < je.size(); ++i) {
    const std::string ctx = origin + ".sft.edges[" + std::to_string(i) + "]";
    const json& item = je[i];
    expect_object(item, ctx);
    check_keys(item, ctx, {"from", "to", "required_speed"});
    SftEdge e;
    e.from = as_string(req_field(item, ctx, "from"), ctx + ".from");
    e.to = as_string(req_field(item, ctx, "to"), ctx + ".to");
    e.required_speed =
        parse_speed(req_field(item, ctx, "required_speed"), ctx + ".required_speed");
    edges.push_back(std::move(e));
  }

  if (const json* cfg = opt_field(doc, "config")) {
    const std::string ctx = origin + ".config";
    expect_object(*cfg, ctx);
    check_keys(*cfg, ctx,
               {"h_max", "modality_link_requirement", "device_order", "random_seed"});
    if (const json* v = opt_field(*cfg, "h_max")) {
      scenario.config.h_max = as_int(*v, ctx + ".h_max");
      if (scenario.config.h_max < 1) fail(ctx + ".h_max", "expected a positive integer");
    }
    if (const json* v = opt_field(*cfg, "modality_link_requirement")) {
      expect_object(*v, ctx + ".modality_link_requirement");
      for (const auto& [modality, units] : v->items())
        scenario.config.modality_link_requirement[modality] =
            parse_speed(units, ctx + ".modality_link_requirement." + modality);
    }
    if (const json* v = opt_field(*cfg, "device_order")) {
      const std::string order = as_string(*v, ctx + ".device_order");
      if (order == "ascending_id") {
        scenario.config.device_order = DeviceOrder::AscendingId;
      } else if (order == "descending_id") {
        scenario.config.device_order = DeviceOrder::DescendingId;
      } else {
        fail(ctx + ".device_order", "expected \"ascending_id\" or \"descending_id\"");
      }
    }
    if (const json* v = opt_field(*cfg, "random_seed"))
      scenario.config.random_seed = as_uint64(*v, ctx + ".random_seed");
  }

  if (const json* v = opt_field(doc, "reference_mapping"))
    scenario.reference_mapping = parse_mapping_object(*v, origin + ".reference_mapping");

  try {
    scenario.network = PhysicalNetwork(std::move(devices), std::move(links));
    scenario.sft = ServiceFunctionTree(std::move(nodes), std::move(edges));
  } catch (const ModelError& e) {
    throw ScenarioError("invalid scenario in " + origin, {e.what()});
  }

  apply_modality_defaults(scenario.config, scenario.sensors);
  if (auto issues = scenario_issues(scenario); !issues.empty())
    throw ScenarioError("invalid scenario in " + origin, std::move(issues));

  return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json_text(read_file(path), path.string());
}

std::string scenario_to_json_text(const Scenario& scenario) {
  json doc;
  if (!scenario.name.empty()) doc["name"] = scenario.name;
  if (!scenario.notes.empty()) doc["notes"] = scenario.notes;

  doc["sensors"] = json::array();
  for (const auto& s : scenario.sensors) {
    json item;
    item["id"] = s.id;
    item["modality"] = s.modality;
    if (!s.roi.empty()) item["roi"] = s.roi;
    doc["sensors"].push_back(std::move(item));
  }

  doc["devices"] = json::array();
  for (const auto& d : scenario.network.devices()) {
    json item;
    item["id"] = d.id;
    item["capacity"] = encode_capacity(d.capacity);
    item["sensors_in_range"] = d.sensors_in_range;
    doc["devices"].push_back(std::move(item));
  }

  doc["links"] = json::array();
  for (const auto& l : scenario.network.links()) {
    json item;
    item["endpoints"] = {l.key.a, l.key.b};
    item["capacity"] = encode_speed(l.capacity);
    doc["links"].push_back(std::move(item));
  }

  doc["sft"]["nodes"] = json::array();
  for (const auto& m : scenario.sft.nodes()) {
    json item;
    item["id"] = m.id;
    item["kind"] = to_string(m.kind);
    item["required_capacity"] = encode_capacity(m.required_capacity);
    if (m.required_modality) item["required_modality"] = *m.required_modality;
    if (!m.eligible_sensors.empty()) item["eligible_sensors"] = m.eligible_sensors;
    if (m.required_sensor_count > 0) item["required_sensor_count"] = m.required_sensor_count;
    doc["sft"]["nodes"].push_back(std::move(item));
  }
  doc["sft"]["edges"] = json::array();
  for (const auto& e : scenario.sft.edges()) {
    json item;
    item["from"] = e.from;
    item["to"] = e.to;
    item["required_speed"] = encode_speed(e.required_speed);
    doc["sft"]["edges"].push_back(std::move(item));
  }

  json cfg;
  cfg["h_max"] = scenario.config.h_max;
  cfg["modality_link_requirement"] = json::object();
  for (const auto& [modality, units] : scenario.config.modality_link_requirement)
    cfg["modality_link_requirement"][modality] = encode_speed(units);
  cfg["device_order"] =
      scenario.config.device_order == DeviceOrder::AscendingId ? "ascending_id" : "descending_id";
  if (scenario.config.random_seed) cfg["random_seed"] = *scenario.config.random_seed;
  doc["config"] = std::move(cfg);

  if (scenario.reference_mapping)
    doc["reference_mapping"] = encode_mapping_object(*scenario.reference_mapping);

  return doc.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  write_file(scenario_to_json_text(scenario), path);
}

Mapping mapping_from_json_text(const std::string& text, const std::string& origin) {
  return parse_mapping_object(parse_document(text, origin), origin);
}

Mapping load_mapping(const std::filesystem::path& path) {
  return mapping_from_json_text(read_file(path), path.string());
}

std::string mapping_to_json_text(const Mapping& mapping) {
  return encode_mapping_object(mapping).dump(2) + "\n";
}

void save_mapping(const Mapping& mapping, const std::filesystem::path& path) {
  write_file(mapping_to_json_text(mapping), path);
}

std::string mappings_to_json_text(const std::vector<Mapping>& mappings) {
  json doc;
  doc["mappings"] = json::array();
  for (const auto& m : mappings) doc["mappings"].push_back(encode_mapping_object(m));
  return doc.dump(2) + "\n";
}

std::string scenario_digest(const Scenario& scenario) {
  const std::string text = scenario_to_json_text(scenario);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string digits(16, '0');
  for (int i = 15; i >= 0; --i) {
    digits[i] = hex[hash & 0xf];
    hash >>= 4;
  }
  return "fnv1a64:" + digits;
}

Report build_report(const Scenario& scenario, bool success, const SolveStats& stats,
                    const Mapping& mapping, const std::vector<Violation>& violations) {
  Report report;
  report.scenario_name = scenario.name;
  report.digest = scenario_digest(scenario);
  report.success = success;
  report.stats = stats;
  report.mapping = mapping;
  report.violations = violations;

  std::map<DeviceId, int> loads;
  for (const auto& [m, d] : mapping.placements) {
    const Microservice* node = scenario.sft.find_node(m);
    loads[d] += node ? node->required_capacity.units : 0;
  }
  for (const auto& dev : scenario.network.devices())
    report.device_loads.push_back({dev.id, dev.capacity.units, loads[dev.id]});

  // Per-link accounting mirrors the audit exactly, including routes the
  // validator had to derive for edges without reservations.
  LinkUsage ledger;
  bool total = true;
  for (const auto& n : scenario.sft.nodes())
    if (!mapping.placements.count(n.id)) total = false;
  if (total && !scenario.sft.nodes().empty())
    validate_full_mapping(scenario.network, scenario.sft, mapping, scenario.config, &ledger);
  for (const auto& l : scenario.network.links())
    report.link_usage.push_back({l.key, l.capacity.units, ledger.used(l.key)});

  for (const auto& dev : mapping.relay_devices()) report.forwarding_devices.push_back(dev);
  return report;
}

std::string report_to_json_text(const Report& report) {
  json doc;
  doc["scenario"] = report.scenario_name;
  doc["digest"] = report.digest;
  doc["success"] = report.success;
  doc["stats"]["attempts"] = report.stats.attempts;
  doc["stats"]["backtracks"] = report.stats.backtracks;
  doc["stats"]["extended_searches"] = report.stats.extended_searches;
  doc["mapping"] = encode_mapping_object(report.mapping);
  doc["violations"] = json::array();
  for (const auto& v : report.violations) {
    json item;
    item["constraint"] = to_string(v.constraint);
    item["subject"] = v.subject;
    item["detail"] = v.detail;
    doc["violations"].push_back(std::move(item));
  }
  doc["device_loads"] = json::array();
  for (const auto& row : report.device_loads) {
    json item;
    item["device"] = row.device;
    item["capacity"] = row.capacity_units;
    item["used"] = row.used_units;
    doc["device_loads"].push_back(std::move(item));
  }
  doc["link_usage"] = json::array();
  for (const auto& row : report.link_usage) {
    json item;
    item["link"] = {row.link.a, row.link.b};
    item["capacity"] = row.capacity_units;
    item["used"] = row.used_units;
    doc["link_usage"].push_back(std::move(item));
  }
  doc["forwarding_devices"] = report.forwarding_devices;
  return doc.dump(2) + "\n";
}

void save_report(const Report& report, const std::filesystem::path& path) {
  write_file(report_to_json_text(report), path);
}

} // namespace sftm
