#include "sftm/oracle.hpp"

#include <algorithm>

#include "sftm/constraints.hpp"
#include "sftm/errors.hpp"
#include "sftm/solver.hpp"

namespace sftm {

namespace {

// Deterministic mapping construction for one total placement vector.
// Children are processed before parents; forwarding for an uncovered leaf
// picks the minimum-hop feasible path from the lowest-id covering device;
// every tree edge routes along the shortest feasible path at the moment
// its consumer is reached. Returns nothing when any step is impossible.
std::optional<Mapping> build_candidate(const PhysicalNetwork& pn, const ServiceFunctionTree& sft,
                                       const SolverConfig& config,
                                       const std::vector<MicroserviceId>& order,
                                       const std::map<MicroserviceId, DeviceId>& placements) {
  // Cheap capacity prune before any routing work.
  std::map<DeviceId, int> load;
  for (const auto& [m, d] : placements) load[d] += sft.node(m).required_capacity.units;
  for (const auto& [d, used] : load)
    if (used > pn.device(d).capacity.units) return std::nullopt;

  Mapping mapping;
  mapping.placements = placements;
  LinkUsage ledger;

  for (const auto& mid : order) {
    const Microservice& m = sft.node(mid);
    const DeviceId& host = placements.at(mid);

    if (m.required_sensor_count > 0 &&
        !has_required_sensors(pn.device(host), m.eligible_sensors, m.required_sensor_count)) {
      const SpeedUnits stream = required_forwarding_speed(m, config);
      std::optional<std::vector<DeviceId>> best;
      DeviceId best_origin;
      for (const auto& dev : pn.devices()) {
        if (!has_required_sensors(dev, m.eligible_sensors, m.required_sensor_count)) continue;
        auto path = find_feasible_path(pn, dev.id, host, stream, ledger, config.h_max);
        if (path && (!best || path->size() < best->size())) {
          best = std::move(path);
          best_origin = dev.id;
        }
      }
      if (!best) return std::nullopt;
      ledger.add_path(*best, stream.units);
      mapping.forwarding.push_back({mid, best_origin, host, stream, std::move(*best)});
    }

    for (const auto& pred : sft.predecessors(mid)) {
      const DeviceId& from = placements.at(pred);
      const SftEdge* edge = sft.find_edge(pred, mid);
      if (from == host) {
        mapping.reserved_paths.push_back({pred, mid, edge->required_speed, {host}});
        continue;
      }
      auto path = find_feasible_path(pn, from, host, edge->required_speed, ledger, config.h_max);
      if (!path) return std::nullopt;
      ledger.add_path(*path, edge->required_speed.units);
      mapping.reserved_paths.push_back({pred, mid, edge->required_speed, std::move(*path)});
    }
  }

  return mapping;
}

std::vector<Mapping> enumerate_impl(const PhysicalNetwork& pn, const ServiceFunctionTree& sft,
                                    const SolverConfig& config,
                                    std::optional<std::uint64_t> limit, std::uint64_t cap,
                                    bool enforce_cap) {
  std::vector<Mapping> out;
  const auto& nodes = sft.nodes();
  const auto& devices = pn.devices();
  if (nodes.empty() || devices.empty()) return out;

  if (enforce_cap) {
    std::uint64_t combos = 1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (combos > cap / devices.size()) {
        throw ExplosionCapError("placement space |D|^|M| = " + std::to_string(devices.size()) +
                                "^" + std::to_string(nodes.size()) + " exceeds the cap of " +
                                std::to_string(cap));
      }
      combos *= devices.size();
    }
  }

  const std::vector<MicroserviceId> order = placement_order(sft);

  // Odometer over device indices, last microservice spinning fastest:
  // placements come out in lexicographic order over (node id, device id).
  std::vector<std::size_t> pick(nodes.size(), 0);
  while (true) {
    std::map<MicroserviceId, DeviceId> placements;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      placements[nodes[i].id] = devices[pick[i]].id;

    auto candidate = build_candidate(pn, sft, config, order, placements);
    if (candidate && validate_full_mapping(pn, sft, *candidate, config).empty()) {
      out.push_back(std::move(*candidate));
      if (limit && out.size() >= *limit) break;
    }

    std::size_t i = nodes.size();
    while (i > 0 && ++pick[i - 1] == devices.size()) pick[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

} // namespace

std::vector<Mapping> enumerate_valid_mappings(const PhysicalNetwork& pn,
                                              const ServiceFunctionTree& sft,
                                              const SolverConfig& config,
                                              const OracleOptions& options) {
  return enumerate_impl(pn, sft, config, options.limit, options.explosion_cap,
                        !options.limit.has_value());
}

bool oracle_feasible(const PhysicalNetwork& pn, const ServiceFunctionTree& sft,
                     const SolverConfig& config, std::uint64_t explosion_cap) {
  return !enumerate_impl(pn, sft, config, 1, explosion_cap, true).empty();
}

} // namespace sftm
