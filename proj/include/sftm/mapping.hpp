#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "sftm/link_usage.hpp"
#include "sftm/model.hpp"

namespace sftm {

// Physical route reserved for one tree edge from -> to. The path lists
// devices from the producer's host to the consumer's host inclusive; a
// single-element path means both run on the same device and no link
// units were consumed.
struct ReservedPath {
  MicroserviceId from;
  MicroserviceId to;
  SpeedUnits required_speed; // units charged on every link along the path
  std::vector<DeviceId> path;

  friend bool operator==(const ReservedPath&, const ReservedPath&) = default;
};

// Sensor-data detour created by the extended search: the leaf microservice
// runs on `host`, which has no eligible sensor in range, and pulls the
// stream from a sensor-covering device instead. The path runs from
// selected_sensor_device to host inclusive.
struct ForwardingRecord {
  MicroserviceId microservice;
  DeviceId selected_sensor_device;
  DeviceId host;
  SpeedUnits required_speed; // per-link units of the forwarded stream
  std::vector<DeviceId> path;

  friend bool operator==(const ForwardingRecord&, const ForwardingRecord&) = default;
};

struct Mapping {
  std::map<MicroserviceId, DeviceId> placements;
  std::vector<ReservedPath> reserved_paths;
  std::vector<ForwardingRecord> forwarding;

  const ReservedPath* find_reserved(const MicroserviceId& from, const MicroserviceId& to) const {
    for (const auto& rp : reserved_paths)
      if (rp.from == from && rp.to == to) return &rp;
    return nullptr;
  }

  const ForwardingRecord* find_forwarding(const MicroserviceId& m) const {
    for (const auto& fw : forwarding)
      if (fw.microservice == m) return &fw;
    return nullptr;
  }

  // Devices whose only job is relaying a forwarded sensor stream: on a
  // forwarding path (host excluded) while hosting no microservice.
  std::set<DeviceId> relay_devices() const {
    std::set<DeviceId> hosts;
    for (const auto& [m, d] : placements) hosts.insert(d);
    std::set<DeviceId> relays;
    for (const auto& fw : forwarding)
      for (std::size_t i = 0; i + 1 < fw.path.size(); ++i)
        if (!hosts.count(fw.path[i])) relays.insert(fw.path[i]);
    return relays;
  }

  friend bool operator==(const Mapping&, const Mapping&) = default;
};

struct SolveStats {
  std::uint64_t attempts = 0;           // per-device placement checks tried
  std::uint64_t backtracks = 0;         // placements reverted after a failed subtree
  std::uint64_t extended_searches = 0;  // sensor-forwarding searches started
  std::chrono::microseconds elapsed{0};
};

struct MappingResult {
  bool success = false;
  Mapping mapping;
  LinkUsage final_link_usage;
  SolveStats stats;
};

} // namespace sftm
