#include "sftm/constraints.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "sftm/errors.hpp"

namespace sftm {

std::string to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::SensorSelection: return "sensor_selection";
    case ConstraintKind::ResourceAllocation: return "resource_allocation";
    case ConstraintKind::PathConnectivity: return "path_connectivity";
    case ConstraintKind::LinkCapacity: return "link_capacity";
    case ConstraintKind::Latency: return "latency";
  }
  return "unknown";
}

namespace {

std::string link_tag(const LinkKey& key) { return "(" + key.a + "," + key.b + ")"; }

std::string edge_tag(const MicroserviceId& from, const MicroserviceId& to) {
  return from + "->" + to;
}

} // namespace

CapacityUnits remaining_capacity(const FogDevice& device,
                                 const std::map<MicroserviceId, DeviceId>& placements,
                                 const ServiceFunctionTree& sft) {
  int used = 0;
  for (const auto& [m, d] : placements) {
    if (d != device.id) continue;
    used += sft.node(m).required_capacity.units; // throws on unknown microservice
  }
  int rest = device.capacity.units - used;
  if (rest < 0)
    throw ModelError("device '" + device.id + "' is over-allocated by " + std::to_string(-rest) +
                     " units");
  return CapacityUnits{rest};
}

bool has_required_sensors(const FogDevice& device, const std::set<SensorId>& eligible_sensors,
                          int required_count) {
  if (required_count <= 0) return true;
  int hits = 0;
  for (const auto& sid : eligible_sensors)
    if (device.sensors_in_range.count(sid)) ++hits;
  return hits >= required_count;
}

bool is_resource_compatible(const FogDevice& device, CapacityUnits required,
                            const std::map<MicroserviceId, DeviceId>& placements,
                            const ServiceFunctionTree& sft) {
  return remaining_capacity(device, placements, sft) >= required;
}

std::optional<std::vector<DeviceId>> find_feasible_path(const PhysicalNetwork& pn,
                                                        const DeviceId& from, const DeviceId& to,
                                                        SpeedUnits required,
                                                        const LinkUsage& usage, int h_max) {
  if (!pn.has_device(from)) throw ModelError("unknown device '" + from + "'");
  if (!pn.has_device(to)) throw ModelError("unknown device '" + to + "'");
  if (from == to) return std::vector<DeviceId>{from};
  if (h_max < 1) return std::nullopt;

  auto passable = [&](const DeviceId& x, const DeviceId& y) {
    auto cap = pn.link_capacity(x, y);
    return cap && cap->units - usage.used(x, y) >= required.units;
  };

  // Hop distances toward the target over passable links only.
  std::map<DeviceId, int> dist;
  dist[to] = 0;
  std::deque<DeviceId> frontier{to};
  while (!frontier.empty()) {
    DeviceId cur = frontier.front();
    frontier.pop_front();
    for (const auto& nb : pn.neighbors(cur)) {
      if (dist.count(nb) || !passable(cur, nb)) continue;
      dist[nb] = dist[cur] + 1;
      frontier.push_back(nb);
    }
  }

  auto it = dist.find(from);
  if (it == dist.end() || it->second > h_max) return std::nullopt;

  // Walk the distance gradient picking the smallest next id each step:
  // among equal-hop routes this yields the lexicographically smallest
  // device sequence.
  std::vector<DeviceId> path{from};
  DeviceId cur = from;
  while (cur != to) {
    int want = dist.at(cur) - 1;
    const DeviceId* next = nullptr;
    for (const auto& nb : pn.neighbors(cur)) { // ascending ids
      auto dit = dist.find(nb);
      if (dit != dist.end() && dit->second == want && passable(cur, nb)) {
        next = &nb;
        break;
      }
    }
    if (!next) return std::nullopt; // unreachable if the BFS above is sound
    path.push_back(*next);
    cur = *next;
  }
  return path;
}

PathCheck validate_path(const PhysicalNetwork& pn, const ServiceFunctionTree& sft,
                        const MicroserviceId& pred, const MicroserviceId& m,
                        const DeviceId& d_pred, const DeviceId& d, const LinkUsage& usage,
                        int h_max) {
  PathCheck res;
  res.usage = usage;
  const SftEdge* edge = sft.find_edge(pred, m);
  if (!edge) throw ModelError("no tree edge " + edge_tag(pred, m));

  if (d_pred == d) {
    // Producer and consumer share the device: nothing crosses the network.
    res.ok = true;
    res.path = {d};
    return res;
  }

  auto path = find_feasible_path(pn, d_pred, d, edge->required_speed, usage, h_max);
  if (!path) return res;
  res.ok = true;
  res.path = std::move(*path);
  res.usage.add_path(res.path, edge->required_speed.units);
  return res;
}

ConnectivityCheck validate_connectivity_and_link_speed(
    const PhysicalNetwork& pn, const ServiceFunctionTree& sft, const MicroserviceId& m,
    const DeviceId& d, const std::map<MicroserviceId, DeviceId>& placements,
    const LinkUsage& usage, int h_max) {
  ConnectivityCheck res;
  res.usage = usage;

  LinkUsage acc = usage;
  std::vector<ReservedPath> paths;
  for (const auto& pred : sft.predecessors(m)) { // ascending ids
    auto it = placements.find(pred);
    if (it == placements.end()) continue; // not placed yet, nothing to route
    PathCheck pc = validate_path(pn, sft, pred, m, it->second, d, acc, h_max);
    if (!pc.ok) return res; // all-or-nothing: input ledger unchanged
    acc = std::move(pc.usage);
    paths.push_back({pred, m, sft.find_edge(pred, m)->required_speed, std::move(pc.path)});
  }

  res.ok = true;
  res.usage = std::move(acc);
  res.paths = std::move(paths);
  return res;
}

SpeedUnits required_forwarding_speed(const Microservice& m, const SolverConfig& config) {
  if (!m.required_modality)
    throw ConfigError("microservice '" + m.id + "' has no modality to forward");
  auto it = config.modality_link_requirement.find(*m.required_modality);
  if (it == config.modality_link_requirement.end())
    throw ConfigError("no link requirement entry for modality '" + *m.required_modality + "'");
  return it->second;
}

ExtendedPathCheck validate_extended_path(const PhysicalNetwork& pn,
                                         const std::vector<DeviceId>& path, SpeedUnits required,
                                         const LinkUsage& usage) {
  ExtendedPathCheck res;
  res.usage = usage;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    auto cap = pn.link_capacity(path[i], path[i + 1]);
    if (!cap) return res; // consecutive devices are not linked
    if (cap->units - res.usage.used(path[i], path[i + 1]) < required.units) {
      res.usage = usage; // roll back partial charges
      return res;
    }
    res.usage.add(path[i], path[i + 1], required.units);
  }
  res.ok = true;
  return res;
}

namespace {

// Path audit shared by tree edges and forwarding records: structural
// integrity first (known devices, linked hops), then the hop bound. Charges
// the ledger only when the route is structurally sound.
struct PathAudit {
  bool structural_ok = false;
  int hops = 0;
};

PathAudit audit_path(const PhysicalNetwork& pn, const std::vector<DeviceId>& path,
                     const std::string& subject, const std::string& what, int h_max,
                     std::vector<Violation>& out) {
  PathAudit audit;
  for (const auto& dev : path) {
    if (!pn.has_device(dev)) {
      out.push_back({ConstraintKind::PathConnectivity, subject,
                     what + " references unknown device '" + dev + "'"});
      return audit;
    }
  }
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!pn.link_capacity(path[i], path[i + 1])) {
      out.push_back({ConstraintKind::PathConnectivity, subject,
                     what + " hops from '" + path[i] + "' to '" + path[i + 1] +
                         "' without a physical link"});
      return audit;
    }
  }
  audit.structural_ok = true;
  audit.hops = static_cast<int>(path.size()) - 1;
  if (audit.hops > h_max)
    out.push_back({ConstraintKind::Latency, subject,
                   what + " spans " + std::to_string(audit.hops) + " hops, limit " +
                       std::to_string(h_max)});
  return audit;
}

} // namespace

std::vector<Violation> validate_full_mapping(const PhysicalNetwork& pn,
                                             const ServiceFunctionTree& sft,
                                             const Mapping& mapping, const SolverConfig& config,
                                             LinkUsage* derived_usage) {
  std::vector<Violation> out;

  auto host_of = [&](const MicroserviceId& m) -> const DeviceId& {
    auto it = mapping.placements.find(m);
    if (it == mapping.placements.end())
      throw ModelError("mapping does not place microservice '" + m + "'");
    return it->second;
  };

  // Sensor coverage per demanding leaf: either the host sees enough
  // eligible sensors or a forwarding record pulls them from a device that
  // does.
  for (const auto& n : sft.nodes()) {
    if (n.required_sensor_count <= 0) continue;
    const DeviceId& host = host_of(n.id);
    const ForwardingRecord* fw = mapping.find_forwarding(n.id);
    const DeviceId& source = fw ? fw->selected_sensor_device : host;
    if (!pn.has_device(source)) {
      out.push_back({ConstraintKind::SensorSelection, n.id,
                     "sensor source '" + source + "' is not a known device"});
      continue;
    }
    if (!has_required_sensors(pn.device(source), n.eligible_sensors, n.required_sensor_count)) {
      out.push_back({ConstraintKind::SensorSelection, n.id,
                     std::string(fw ? "forwarding origin" : "host") + " '" + source +
                         "' lacks " + std::to_string(n.required_sensor_count) +
                         " eligible sensors"});
    }
  }

  // Per-device load against capacity.
  for (const auto& dev : pn.devices()) {
    int used = 0;
    for (const auto& [m, d] : mapping.placements)
      if (d == dev.id) used += sft.node(m).required_capacity.units;
    if (used > dev.capacity.units)
      out.push_back({ConstraintKind::ResourceAllocation, dev.id,
                     std::to_string(used) + " units placed on a device with " +
                         std::to_string(dev.capacity.units)});
  }

  // Route every tree edge, preferring recorded reservations. Derived
  // routes try to respect remaining capacity; when only overloaded routes
  // remain the shortest one is charged anyway so the excess shows up as
  // LinkCapacity below instead of a connectivity failure.
  LinkUsage ledger;
  for (const auto& e : sft.edges()) {
    const std::string subject = edge_tag(e.from, e.to);
    const DeviceId& df = host_of(e.from);
    const DeviceId& dt = host_of(e.to);

    std::vector<DeviceId> path;
    if (const ReservedPath* rp = mapping.find_reserved(e.from, e.to)) {
      if (rp->path.empty() || rp->path.front() != df || rp->path.back() != dt) {
        out.push_back({ConstraintKind::PathConnectivity, subject,
                       "reserved path endpoints do not match the placements"});
        continue;
      }
      path = rp->path;
    } else if (df == dt) {
      continue; // co-located, no links involved
    } else {
      auto feasible = find_feasible_path(pn, df, dt, e.required_speed, ledger, config.h_max);
      if (feasible) {
        path = std::move(*feasible);
      } else {
        auto any = find_feasible_path(pn, df, dt, SpeedUnits{0}, LinkUsage{},
                                      std::numeric_limits<int>::max());
        if (!any) {
          out.push_back({ConstraintKind::PathConnectivity, subject,
                         "no path between '" + df + "' and '" + dt + "'"});
          continue;
        }
        path = std::move(*any);
      }
    }

    PathAudit audit = audit_path(pn, path, subject, "path", config.h_max, out);
    if (audit.structural_ok) ledger.add_path(path, e.required_speed.units);
  }

  // Forwarding paths: structure, hop bound, origin/host consistency, and
  // their own link load.
  std::vector<ForwardingRecord> fws = mapping.forwarding;
  std::sort(fws.begin(), fws.end(), [](const ForwardingRecord& x, const ForwardingRecord& y) {
    return x.microservice < y.microservice;
  });
  for (const auto& fw : fws) {
    const std::string subject = fw.microservice;
    const Microservice* leaf = sft.find_node(fw.microservice);
    if (!leaf) {
      out.push_back({ConstraintKind::PathConnectivity, subject,
                     "forwarding record for unknown microservice"});
      continue;
    }
    if (fw.path.empty() || fw.path.front() != fw.selected_sensor_device ||
        fw.path.back() != fw.host || fw.host != host_of(fw.microservice)) {
      out.push_back({ConstraintKind::PathConnectivity, subject,
                     "forwarding path must run from the selected sensor device to the host"});
      continue;
    }
    PathAudit audit = audit_path(pn, fw.path, subject, "forwarding path", config.h_max, out);
    if (audit.structural_ok)
      ledger.add_path(fw.path, required_forwarding_speed(*leaf, config).units);
  }

  // Aggregate load per physical link.
  for (const auto& [key, used] : ledger.entries()) {
    auto cap = pn.link_capacity(key);
    if (!cap) continue; // unlinked hops were already reported structurally
    if (used > cap->units)
      out.push_back({ConstraintKind::LinkCapacity, link_tag(key),
                     std::to_string(used) + " units routed over a link with " +
                         std::to_string(cap->units)});
  }

  if (derived_usage) *derived_usage = std::move(ledger);
  return out;
}

} // namespace sftm
