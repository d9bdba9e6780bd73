#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sftm/units.hpp"

namespace sftm {

using DeviceId = std::string;
using SensorId = std::string;
using MicroserviceId = std::string;
using Modality = std::string;

struct Sensor {
  SensorId id;
  Modality modality; // e.g. "temperature", "visual", "wind"
  std::string roi;   // region-of-interest tag the sensor observes

  friend bool operator==(const Sensor&, const Sensor&) = default;
};

struct FogDevice {
  DeviceId id;
  CapacityUnits capacity;
  std::set<SensorId> sensors_in_range;

  friend bool operator==(const FogDevice&, const FogDevice&) = default;
};

// Unordered pair of device ids; construction normalizes the order so the
// same physical link always compares and hashes identically.
struct LinkKey {
  DeviceId a;
  DeviceId b;

  LinkKey() = default;
  LinkKey(DeviceId x, DeviceId y);

  friend auto operator<=>(const LinkKey&, const LinkKey&) = default;
};

struct PhysicalLink {
  LinkKey key;
  SpeedUnits capacity;

  friend bool operator==(const PhysicalLink&, const PhysicalLink&) = default;
};

// Undirected fog-device graph. Construction validates referential
// integrity (unique ids, known endpoints, no self-loops or duplicate
// links, non-negative units) and throws ModelError on breakage.
class PhysicalNetwork {
public:
  PhysicalNetwork() = default;
  PhysicalNetwork(std::vector<FogDevice> devices, std::vector<PhysicalLink> links);

  const std::vector<FogDevice>& devices() const noexcept { return devices_; }
  const std::vector<PhysicalLink>& links() const noexcept { return links_; }

  bool has_device(const DeviceId& id) const;
  const FogDevice* find_device(const DeviceId& id) const;
  const FogDevice& device(const DeviceId& id) const; // throws ModelError if absent

  // Adjacent device ids in ascending order; empty for isolated devices.
  const std::vector<DeviceId>& neighbors(const DeviceId& id) const;

  std::optional<SpeedUnits> link_capacity(const LinkKey& key) const;
  std::optional<SpeedUnits> link_capacity(const DeviceId& x, const DeviceId& y) const;

  friend bool operator==(const PhysicalNetwork&, const PhysicalNetwork&) = default;

private:
  std::vector<FogDevice> devices_;   // sorted by id
  std::vector<PhysicalLink> links_;  // sorted by key
  std::map<DeviceId, std::vector<DeviceId>> adjacency_;
  std::map<LinkKey, SpeedUnits> capacity_;
};

enum class MicroserviceKind { Filter, Aggregator, EventHandler };

std::string to_string(MicroserviceKind kind);

struct Microservice {
  MicroserviceId id;
  MicroserviceKind kind = MicroserviceKind::Filter;
  CapacityUnits required_capacity;

  // Sensor demand; meaningful only on leaves. required_sensor_count = 0
  // means the node consumes no sensor data directly.
  std::optional<Modality> required_modality;
  std::set<SensorId> eligible_sensors;
  int required_sensor_count = 0;

  friend bool operator==(const Microservice&, const Microservice&) = default;
};

struct SftEdge {
  MicroserviceId from; // producer (child)
  MicroserviceId to;   // consumer (parent)
  SpeedUnits required_speed;

  friend bool operator==(const SftEdge&, const SftEdge&) = default;
};

// Directed microservice graph, child -> parent. Construction enforces
// referential integrity only; shape rules (single event-handler sink,
// leaf/sensor coupling, ...) are reported as data by sft_well_formed so
// malformed trees stay representable for diagnostics.
class ServiceFunctionTree {
public:
  ServiceFunctionTree() = default;
  ServiceFunctionTree(std::vector<Microservice> nodes, std::vector<SftEdge> edges);

  const std::vector<Microservice>& nodes() const noexcept { return nodes_; }
  const std::vector<SftEdge>& edges() const noexcept { return edges_; }

  bool has_node(const MicroserviceId& id) const;
  const Microservice* find_node(const MicroserviceId& id) const;
  const Microservice& node(const MicroserviceId& id) const; // throws ModelError if absent

  const SftEdge* find_edge(const MicroserviceId& from, const MicroserviceId& to) const;

  // Producers feeding id (edge sources), ascending.
  const std::vector<MicroserviceId>& predecessors(const MicroserviceId& id) const;
  // Consumers fed by id (edge targets), ascending. Well-formed trees have
  // at most one, but malformed input may carry several.
  const std::vector<MicroserviceId>& successors(const MicroserviceId& id) const;

  bool is_leaf(const MicroserviceId& id) const; // no incoming edges

  friend bool operator==(const ServiceFunctionTree&, const ServiceFunctionTree&) = default;

private:
  std::vector<Microservice> nodes_; // sorted by id
  std::vector<SftEdge> edges_;      // sorted by (from, to)
  std::map<MicroserviceId, std::vector<MicroserviceId>> preds_;
  std::map<MicroserviceId, std::vector<MicroserviceId>> succs_;
};

struct SftDefect {
  std::string subject; // node id, "from->to" edge tag, or "tree"
  std::string detail;

  friend bool operator==(const SftDefect&, const SftDefect&) = default;
};

// Structural audit of an SFT. Empty result means the tree satisfies all
// shape rules: unique event-handler sink, every non-sink node has exactly
// one consumer, every node reaches the sink (no cycles, no disconnected
// parts), filters are sources, aggregators have producers, and sensor
// demands sit exactly on the leaves with enough eligible sensors.
std::vector<SftDefect> sft_well_formed(const ServiceFunctionTree& sft);

enum class DeviceOrder { AscendingId, DescendingId };

struct SolverConfig {
  int h_max = 3; // max hops any single mapped tree edge or forwarding path may span

  // Link units one sensor stream of a given modality consumes when it has
  // to be forwarded across the network. Missing modalities are an error at
  // lookup time; apply_modality_defaults fills visual -> Fast, others -> Slow.
  std::map<Modality, SpeedUnits> modality_link_requirement;

  DeviceOrder device_order = DeviceOrder::AscendingId;
  std::optional<std::uint64_t> random_seed;

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

// Inserts the default link requirement for every modality the sensor list
// mentions that the table does not cover yet.
void apply_modality_defaults(SolverConfig& config, const std::vector<Sensor>& sensors);

} // namespace sftm
