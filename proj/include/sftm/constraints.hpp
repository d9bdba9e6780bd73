#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sftm/link_usage.hpp"
#include "sftm/mapping.hpp"
#include "sftm/model.hpp"

namespace sftm {

enum class ConstraintKind {
  SensorSelection,
  ResourceAllocation,
  PathConnectivity,
  LinkCapacity,
  Latency,
};

// Stable tag used in reports and CLI output ("sensor_selection", ...).
std::string to_string(ConstraintKind kind);

struct Violation {
  ConstraintKind constraint;
  std::string subject; // device id, "(a,b)" link tag, "from->to" edge tag, or microservice id
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Capacity units still free on `device` given the current placements.
// Throws ModelError when a placed microservice is unknown to the tree or
// the bookkeeping would go negative (placements exceeding capacity are an
// upstream bug, not a representable state).
CapacityUnits remaining_capacity(const FogDevice& device,
                                 const std::map<MicroserviceId, DeviceId>& placements,
                                 const ServiceFunctionTree& sft);

// True when the device has at least `required_count` of the eligible
// sensors in range. A demand of zero is vacuously satisfied.
bool has_required_sensors(const FogDevice& device,
                          const std::set<SensorId>& eligible_sensors,
                          int required_count);

// True when the device's remaining capacity covers `required`.
bool is_resource_compatible(const FogDevice& device, CapacityUnits required,
                            const std::map<MicroserviceId, DeviceId>& placements,
                            const ServiceFunctionTree& sft);

// Shortest path from `from` to `to` (device id lists, endpoints included)
// whose links all still have `required` units free on top of `usage` and
// whose hop count is <= h_max. Ties between equal-hop paths resolve to the
// lexicographically smallest device-id sequence. Degenerate from == to
// yields the single-element path. nullopt when no such path exists.
std::optional<std::vector<DeviceId>> find_feasible_path(const PhysicalNetwork& pn,
                                                        const DeviceId& from, const DeviceId& to,
                                                        SpeedUnits required,
                                                        const LinkUsage& usage, int h_max);

struct PathCheck {
  bool ok = false;
  LinkUsage usage;           // input ledger + this path's charges; input unchanged on failure
  std::vector<DeviceId> path; // route found, single-element when co-located
};

// Routes the tree edge pred -> m between their hosts and charges the
// edge's required speed along the chosen path. Co-location (d_pred == d)
// succeeds without touching any link.
PathCheck validate_path(const PhysicalNetwork& pn, const ServiceFunctionTree& sft,
                        const MicroserviceId& pred, const MicroserviceId& m,
                        const DeviceId& d_pred, const DeviceId& d,
                        const LinkUsage& usage, int h_max);

struct ConnectivityCheck {
  bool ok = false;
  LinkUsage usage; // all-or-nothing: either every edge charged or input unchanged
  std::vector<ReservedPath> paths;
};

// Routes every already-placed producer of m to candidate device d,
// accumulating charges edge by edge. Vacuously true with no placed
// producers. On any failure the input ledger is returned unchanged.
ConnectivityCheck validate_connectivity_and_link_speed(
    const PhysicalNetwork& pn, const ServiceFunctionTree& sft, const MicroserviceId& m,
    const DeviceId& d, const std::map<MicroserviceId, DeviceId>& placements,
    const LinkUsage& usage, int h_max);

// Link units one forwarded sensor stream for leaf m consumes, from the
// config's per-modality table. Throws ConfigError when the modality has no
// entry or the leaf declares no modality.
SpeedUnits required_forwarding_speed(const Microservice& m, const SolverConfig& config);

struct ExtendedPathCheck {
  bool ok = false;
  LinkUsage usage; // input + charges on success, input unchanged on failure
};

// Charges `required` units on every consecutive link of an explicit
// forwarding path. Fails when a consecutive pair is not a physical link or
// the residual capacity anywhere is too small. Single-element paths are
// vacuously fine.
ExtendedPathCheck validate_extended_path(const PhysicalNetwork& pn,
                                         const std::vector<DeviceId>& path, SpeedUnits required,
                                         const LinkUsage& usage);

// Full independent audit of a finished mapping: sensor coverage on every
// leaf (directly or through its forwarding record), per-device capacity,
// path integrity and hop bounds for every tree edge and forwarding path,
// and aggregate per-link load. Tree edges without a reserved path are
// routed here: shortest feasible path first, else shortest path ignoring
// capacity so overload shows up as LinkCapacity rather than connectivity.
// Returns all violations in deterministic order; empty means valid. When
// derived_usage is given it receives the audit's per-link accounting
// (reserved, derived and forwarding charges combined). Precondition:
// placements cover every tree node and reference existing devices (callers
// check and report that as an input error).
std::vector<Violation> validate_full_mapping(const PhysicalNetwork& pn,
                                             const ServiceFunctionTree& sft,
                                             const Mapping& mapping, const SolverConfig& config,
                                             LinkUsage* derived_usage = nullptr);

} // namespace sftm
