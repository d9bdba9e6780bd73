#include "sftm/model.hpp"

#include <algorithm>
#include <deque>
#include <utility>

#include "sftm/errors.hpp"
#include "sftm/scenario.hpp"

namespace sftm {

LinkKey::LinkKey(DeviceId x, DeviceId y) {
  if (y < x) std::swap(x, y);
  a = std::move(x);
  b = std::move(y);
}

PhysicalNetwork::PhysicalNetwork(std::vector<FogDevice> devices, std::vector<PhysicalLink> links)
    : devices_(std::move(devices)), links_(std::move(links)) {
  std::sort(devices_.begin(), devices_.end(),
            [](const FogDevice& x, const FogDevice& y) { return x.id < y.id; });
  for (std::size_t i = 0; i + 1 < devices_.size(); ++i)
    if (devices_[i].id == devices_[i + 1].id)
      throw ModelError("duplicate device id '" + devices_[i].id + "'");
  for (const auto& d : devices_) {
    if (d.id.empty()) throw ModelError("device with empty id");
    if (d.capacity.units < 0)
      throw ModelError("device '" + d.id + "' has negative capacity");
    adjacency_[d.id]; // ensure an entry even for isolated devices
  }

  std::sort(links_.begin(), links_.end(),
            [](const PhysicalLink& x, const PhysicalLink& y) { return x.key < y.key; });
  for (const auto& l : links_) {
    if (l.key.a == l.key.b)
      throw ModelError("self-loop link on device '" + l.key.a + "'");
    if (!has_device(l.key.a) || !has_device(l.key.b))
      throw ModelError("link (" + l.key.a + "," + l.key.b + ") references an unknown device");
    if (l.capacity.units < 1)
      throw ModelError("link (" + l.key.a + "," + l.key.b + ") must have positive capacity");
    if (capacity_.count(l.key))
      throw ModelError("duplicate link (" + l.key.a + "," + l.key.b + ")");
    capacity_[l.key] = l.capacity;
    adjacency_[l.key.a].push_back(l.key.b);
    adjacency_[l.key.b].push_back(l.key.a);
  }
  for (auto& [id, nbs] : adjacency_) std::sort(nbs.begin(), nbs.end());
}

bool PhysicalNetwork::has_device(const DeviceId& id) const { return find_device(id) != nullptr; }

const FogDevice* PhysicalNetwork::find_device(const DeviceId& id) const {
  auto it = std::lower_bound(devices_.begin(), devices_.end(), id,
                             [](const FogDevice& d, const DeviceId& key) { return d.id < key; });
  return (it != devices_.end() && it->id == id) ? &*it : nullptr;
}

const FogDevice& PhysicalNetwork::device(const DeviceId& id) const {
  const FogDevice* d = find_device(id);
  if (!d) throw ModelError("unknown device '" + id + "'");
  return *d;
}

const std::vector<DeviceId>& PhysicalNetwork::neighbors(const DeviceId& id) const {
  auto it = adjacency_.find(id);
  if (it == adjacency_.end()) throw ModelError("unknown device '" + id + "'");
  return it->second;
}

std::optional<SpeedUnits> PhysicalNetwork::link_capacity(const LinkKey& key) const {
  auto it = capacity_.find(key);
  if (it == capacity_.end()) return std::nullopt;
  return it->second;
}

std::optional<SpeedUnits> PhysicalNetwork::link_capacity(const DeviceId& x,
                                                         const DeviceId& y) const {
  return link_capacity(LinkKey(x, y));
}

std::string to_string(MicroserviceKind kind) {
  switch (kind) {
    case MicroserviceKind::Filter: return "filter";
    case MicroserviceKind::Aggregator: return "aggregator";
    case MicroserviceKind::EventHandler: return "event_handler";
  }
  return "unknown";
}

ServiceFunctionTree::ServiceFunctionTree(std::vector<Microservice> nodes,
                                         std::vector<SftEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::sort(nodes_.begin(), nodes_.end(),
            [](const Microservice& x, const Microservice& y) { return x.id < y.id; });
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
    if (nodes_[i].id == nodes_[i + 1].id)
      throw ModelError("duplicate microservice id '" + nodes_[i].id + "'");
  for (const auto& n : nodes_) {
    if (n.id.empty()) throw ModelError("microservice with empty id");
    preds_[n.id];
    succs_[n.id];
  }

  std::sort(edges_.begin(), edges_.end(), [](const SftEdge& x, const SftEdge& y) {
    return std::tie(x.from, x.to) < std::tie(y.from, y.to);
  });
  for (std::size_t i = 0; i + 1 < edges_.size(); ++i)
    if (edges_[i].from == edges_[i + 1].from && edges_[i].to == edges_[i + 1].to)
      throw ModelError("duplicate edge " + edges_[i].from + "->" + edges_[i].to);
  for (const auto& e : edges_) {
    if (e.from == e.to) throw ModelError("self-loop edge on microservice '" + e.from + "'");
    if (!has_node(e.from) || !has_node(e.to))
      throw ModelError("edge " + e.from + "->" + e.to + " references an unknown microservice");
    preds_[e.to].push_back(e.from);
    succs_[e.from].push_back(e.to);
  }
  for (auto& [id, v] : preds_) std::sort(v.begin(), v.end());
  for (auto& [id, v] : succs_) std::sort(v.begin(), v.end());
}

bool ServiceFunctionTree::has_node(const MicroserviceId& id) const {
  return find_node(id) != nullptr;
}

const Microservice* ServiceFunctionTree::find_node(const MicroserviceId& id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const Microservice& n, const MicroserviceId& key) { return n.id < key; });
  return (it != nodes_.end() && it->id == id) ? &*it : nullptr;
}

const Microservice& ServiceFunctionTree::node(const MicroserviceId& id) const {
  const Microservice* n = find_node(id);
  if (!n) throw ModelError("unknown microservice '" + id + "'");
  return *n;
}

const SftEdge* ServiceFunctionTree::find_edge(const MicroserviceId& from,
                                              const MicroserviceId& to) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::tie(from, to),
                             [](const SftEdge& e, const auto& key) {
                               return std::tie(e.from, e.to) < key;
                             });
  return (it != edges_.end() && it->from == from && it->to == to) ? &*it : nullptr;
}

const std::vector<MicroserviceId>& ServiceFunctionTree::predecessors(
    const MicroserviceId& id) const {
  auto it = preds_.find(id);
  if (it == preds_.end()) throw ModelError("unknown microservice '" + id + "'");
  return it->second;
}

const std::vector<MicroserviceId>& ServiceFunctionTree::successors(
    const MicroserviceId& id) const {
  auto it = succs_.find(id);
  if (it == succs_.end()) throw ModelError("unknown microservice '" + id + "'");
  return it->second;
}

bool ServiceFunctionTree::is_leaf(const MicroserviceId& id) const {
  return predecessors(id).empty();
}

std::vector<SftDefect> sft_well_formed(const ServiceFunctionTree& sft) {
  std::vector<SftDefect> defects;
  const auto& nodes = sft.nodes();
  if (nodes.empty()) {
    defects.push_back({"tree", "tree has no nodes"});
    return defects;
  }

  std::vector<MicroserviceId> sinks;
  for (const auto& n : nodes)
    if (sft.successors(n.id).empty()) sinks.push_back(n.id);

  if (sinks.empty()) {
    defects.push_back({"tree", "no sink node (every node has an outgoing edge)"});
  } else if (sinks.size() > 1) {
    std::string list;
    for (const auto& s : sinks) list += (list.empty() ? "" : ", ") + s;
    defects.push_back({"tree", "multiple sink nodes: " + list});
  } else if (sft.node(sinks.front()).kind != MicroserviceKind::EventHandler) {
    defects.push_back({sinks.front(), "sink node must be an event handler"});
  }

  for (const auto& n : nodes) {
    const auto out = sft.successors(n.id).size();
    const auto in = sft.predecessors(n.id).size();

    if (out > 1)
      defects.push_back({n.id, "node has " + std::to_string(out) + " outgoing edges (max 1)"});

    switch (n.kind) {
      case MicroserviceKind::Filter:
        if (in != 0) defects.push_back({n.id, "filter must not have incoming edges"});
        if (out != 1) defects.push_back({n.id, "filter must have exactly one outgoing edge"});
        break;
      case MicroserviceKind::Aggregator:
        if (in == 0) defects.push_back({n.id, "aggregator has no incoming edges"});
        if (out != 1) defects.push_back({n.id, "aggregator must have exactly one outgoing edge"});
        break;
      case MicroserviceKind::EventHandler:
        if (out != 0) defects.push_back({n.id, "event handler must not have outgoing edges"});
        break;
    }

    if (n.required_capacity.units < 0)
      defects.push_back({n.id, "negative required capacity"});
    if (n.required_sensor_count < 0)
      defects.push_back({n.id, "negative required sensor count"});

    const bool leaf = in == 0;
    if (leaf && n.required_sensor_count <= 0)
      defects.push_back({n.id, "leaf must require at least one sensor"});
    if (!leaf && n.required_sensor_count > 0)
      defects.push_back({n.id, "non-leaf must not require sensors"});
    if (!leaf && !n.eligible_sensors.empty())
      defects.push_back({n.id, "non-leaf must not list eligible sensors"});
    if (n.required_sensor_count > static_cast<int>(n.eligible_sensors.size()))
      defects.push_back({n.id, "required sensor count exceeds eligible sensor set"});
    if (leaf && n.required_sensor_count > 0 && !n.required_modality)
      defects.push_back({n.id, "leaf with sensor demand must declare a modality"});
  }

  for (const auto& e : sft.edges())
    if (e.required_speed.units < 1)
      defects.push_back({e.from + "->" + e.to, "edge must require positive speed units"});

  // Every node must be able to reach the sink; nodes that cannot are either
  // on a cycle or in a disconnected part.
  if (sinks.size() == 1) {
    std::set<MicroserviceId> reached;
    std::deque<MicroserviceId> frontier{sinks.front()};
    reached.insert(sinks.front());
    while (!frontier.empty()) {
      MicroserviceId cur = frontier.front();
      frontier.pop_front();
      for (const auto& p : sft.predecessors(cur))
        if (reached.insert(p).second) frontier.push_back(p);
    }
    for (const auto& n : nodes)
      if (!reached.count(n.id))
        defects.push_back({n.id, "node cannot reach the sink (cycle or disconnected part)"});
  }

  return defects;
}

void apply_modality_defaults(SolverConfig& config, const std::vector<Sensor>& sensors) {
  for (const auto& s : sensors) {
    if (config.modality_link_requirement.count(s.modality)) continue;
    config.modality_link_requirement[s.modality] =
        s.modality == "visual" ? SpeedUnits::fast() : SpeedUnits::slow();
  }
}

std::vector<std::string> scenario_issues(const Scenario& scenario) {
  std::vector<std::string> issues;

  std::map<SensorId, const Sensor*> by_id;
  for (const auto& s : scenario.sensors) {
    if (s.id.empty()) issues.push_back("sensor with empty id");
    if (!by_id.emplace(s.id, &s).second)
      issues.push_back("duplicate sensor id '" + s.id + "'");
    if (s.modality.empty()) issues.push_back("sensor '" + s.id + "' has empty modality");
  }

  for (const auto& d : scenario.network.devices())
    for (const auto& sid : d.sensors_in_range)
      if (!by_id.count(sid))
        issues.push_back("device '" + d.id + "' lists unknown sensor '" + sid + "'");

  for (const auto& defect : sft_well_formed(scenario.sft))
    issues.push_back("tree defect at " + defect.subject + ": " + defect.detail);

  for (const auto& n : scenario.sft.nodes()) {
    for (const auto& sid : n.eligible_sensors) {
      auto it = by_id.find(sid);
      if (it == by_id.end()) {
        issues.push_back("microservice '" + n.id + "' lists unknown sensor '" + sid + "'");
      } else if (n.required_modality && it->second->modality != *n.required_modality) {
        issues.push_back("microservice '" + n.id + "' eligible sensor '" + sid +
                         "' has modality '" + it->second->modality + "', expected '" +
                         *n.required_modality + "'");
      }
    }
  }

  if (scenario.config.h_max < 1)
    issues.push_back("config h_max must be at least 1");
  for (const auto& [modality, units] : scenario.config.modality_link_requirement)
    if (units.units < 1)
      issues.push_back("link requirement for modality '" + modality + "' must be positive");
  for (const auto& s : scenario.sensors)
    if (!scenario.config.modality_link_requirement.count(s.modality))
      issues.push_back("no link requirement entry for modality '" + s.modality + "'");

  if (scenario.reference_mapping) {
    for (const auto& [m, d] : scenario.reference_mapping->placements) {
      if (!scenario.sft.has_node(m))
        issues.push_back("reference mapping places unknown microservice '" + m + "'");
      if (!scenario.network.has_device(d))
        issues.push_back("reference mapping uses unknown device '" + d + "'");
    }
  }

  return issues;
}

} // namespace sftm
