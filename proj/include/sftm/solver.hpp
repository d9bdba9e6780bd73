#pragma once

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "sftm/constraints.hpp"
#include "sftm/mapping.hpp"
#include "sftm/model.hpp"

namespace sftm {

// Children-before-parents placement order: nodes sorted by depth measured
// from the leaves (leaves first), ties by ascending id. Throws ModelError
// on cyclic input; callers are expected to have run sft_well_formed.
std::vector<MicroserviceId> placement_order(const ServiceFunctionTree& sft);

// Per-microservice device exclusion sets maintained across backtracking:
// a device is excluded for a microservice once placing it there failed,
// and the sets of all later microservices reset whenever an earlier
// placement is reverted.
using ExclusionSets = std::map<MicroserviceId, std::set<DeviceId>>;

// Snapshot handed to test hooks around a backtrack event.
struct SolverState {
  std::map<MicroserviceId, DeviceId> placements;
  std::map<DeviceId, int> remaining_units; // per-device free capacity
  LinkUsage usage;
  std::vector<ReservedPath> reserved_paths;
  std::vector<ForwardingRecord> forwarding;

  friend bool operator==(const SolverState&, const SolverState&) = default;
};

// Instrumentation for tests: on_backtrack fires after a failed subtree
// forced a placement to be undone, with the state captured right before
// that placement and the state right after the revert.
struct SolveHooks {
  std::function<void(const MicroserviceId& m, const DeviceId& device,
                     const SolverState& before_placement, const SolverState& after_revert)>
      on_backtrack;
};

struct PlacementCheck {
  bool valid = false;
  bool covers_sensors = false; // device holds enough eligible sensors (and the demand is non-zero)
  LinkUsage usage;             // input + producer-path charges on success, input unchanged else
  std::vector<ReservedPath> paths;
};

// Single placement attempt of m on d: sensor coverage when m demands
// sensors, remaining capacity, and routes from every already-placed
// producer (skipped entirely when one of them already runs on d itself;
// then only the co-located and remaining producers are charged as usual).
PlacementCheck place_on_device(const Microservice& m, const FogDevice& d,
                               const PhysicalNetwork& pn, const ServiceFunctionTree& sft,
                               const std::map<MicroserviceId, DeviceId>& placements,
                               const LinkUsage& usage, const SolverConfig& config);

struct ExtendedSearchResult {
  bool valid = false;
  DeviceId host;               // device the leaf lands on
  DeviceId selected_sensor_device;
  std::vector<DeviceId> path;  // selected_sensor_device ... host inclusive
  LinkUsage usage;             // input + forwarding charges on success, input unchanged else
};

// Fallback placement for a sensor-demanding leaf no device could host
// directly: breadth-first ripples out from each sensor-covering device (in
// the order the sweep discovered them) looking for the closest
// resource-compatible host outside that covering set whose forwarding path
// has link headroom. Every candidate path is charged against the ledger as
// it was before the whole placement attempt. Hosts beyond h_max hops are
// out of reach. excluded_hosts removes candidates the caller already tried
// without success, so repeated searches walk down the distance ranking.
ExtendedSearchResult extended_search(const Microservice& m, const PhysicalNetwork& pn,
                                     const ServiceFunctionTree& sft,
                                     const std::map<MicroserviceId, DeviceId>& placements,
                                     const LinkUsage& usage,
                                     const std::vector<DeviceId>& sensor_covering,
                                     const SolverConfig& config,
                                     const std::set<DeviceId>& excluded_hosts = {});

// Recursive backtracking search for a complete constraint-satisfying
// mapping of the tree onto the network. Deterministic for a fixed
// scenario: devices are swept in config.device_order, microservices in
// placement_order. Returns success plus the mapping, final ledger and
// search counters; on failure the partial structures are empty.
MappingResult map_tree_to_network(const ServiceFunctionTree& sft, const PhysicalNetwork& pn,
                                  const SolverConfig& config, const SolveHooks* hooks = nullptr);

} // namespace sftm
