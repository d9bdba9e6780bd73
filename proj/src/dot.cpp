#include "sftm/dot.hpp"

#include <map>
#include <sstream>

#include "sftm/errors.hpp"

namespace sftm {

namespace {

void require_known(const PhysicalNetwork& pn, const DeviceId& id, const char* role) {
  if (!pn.has_device(id))
    throw ModelError(std::string("mapping ") + role + " references unknown device '" + id + "'");
}

// One label segment per distinct unit size crossing the link, the common
// sizes spelled out ("fast:2 slow:1"), anything else as "<n>u:<count>".
std::string flow_label(const std::map<int, int>& flows) {
  std::ostringstream out;
  bool first = true;
  auto append = [&](const std::string& tag, int count) {
    if (!first) out << " ";
    out << tag << ":" << count;
    first = false;
  };
  if (auto it = flows.find(SpeedUnits::fast().units); it != flows.end())
    append("fast", it->second);
  if (auto it = flows.find(SpeedUnits::slow().units); it != flows.end())
    append("slow", it->second);
  for (const auto& [units, count] : flows)
    if (units != SpeedUnits::fast().units && units != SpeedUnits::slow().units)
      append(std::to_string(units) + "u", count);
  return out.str();
}

} // namespace

std::string export_dot(const PhysicalNetwork& pn, const MappingResult& result) {
  const Mapping& mapping = result.mapping;

  std::map<DeviceId, std::vector<MicroserviceId>> hosted;
  for (const auto& [m, d] : mapping.placements) {
    require_known(pn, d, "placement");
    hosted[d].push_back(m); // placements iterate ascending, so lists stay sorted
  }

  std::map<LinkKey, std::map<int, int>> flows;
  auto walk = [&](const std::vector<DeviceId>& path, int units, const char* role) {
    for (const auto& dev : path) require_known(pn, dev, role);
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      ++flows[LinkKey(path[i], path[i + 1])][units];
  };
  for (const auto& rp : mapping.reserved_paths)
    walk(rp.path, rp.required_speed.units, "reserved path");
  for (const auto& fw : mapping.forwarding)
    walk(fw.path, fw.required_speed.units, "forwarding path");

  const std::set<DeviceId> relays = mapping.relay_devices();

  std::ostringstream out;
  out << "graph mapping {\n";
  out << "  node [shape=ellipse, style=filled, fillcolor=lightblue];\n";
  for (const auto& dev : pn.devices()) {
    auto it = hosted.find(dev.id);
    if (it != hosted.end()) {
      std::string label = dev.id + "\\n";
      for (std::size_t i = 0; i < it->second.size(); ++i)
        label += (i ? "," : "") + it->second[i];
      out << "  \"" << dev.id << "\" [fillcolor=yellow, label=\"" << label << "\"];\n";
    } else if (relays.count(dev.id)) {
      out << "  \"" << dev.id << "\" [fillcolor=red];\n";
    } else {
      out << "  \"" << dev.id << "\";\n";
    }
  }
  for (const auto& link : pn.links()) {
    out << "  \"" << link.key.a << "\" -- \"" << link.key.b << "\"";
    auto it = flows.find(link.key);
    if (it != flows.end()) out << " [label=\"" << flow_label(it->second) << "\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

} // namespace sftm
