#include "sftm/solver.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <limits>

#include "sftm/errors.hpp"

namespace sftm {

std::vector<MicroserviceId> placement_order(const ServiceFunctionTree& sft) {
  // Level = longest distance from any leaf; children always precede
  // parents, leaves come first, the sink lands last.
  std::map<MicroserviceId, int> level;
  std::map<MicroserviceId, int> pending; // producers not processed yet
  std::deque<MicroserviceId> ready;
  for (const auto& n : sft.nodes()) {
    int in = static_cast<int>(sft.predecessors(n.id).size());
    pending[n.id] = in;
    if (in == 0) {
      level[n.id] = 0;
      ready.push_back(n.id);
    }
  }

  std::size_t processed = 0;
  while (!ready.empty()) {
    MicroserviceId cur = ready.front();
    ready.pop_front();
    ++processed;
    for (const auto& succ : sft.successors(cur)) {
      level[succ] = std::max(level[succ], level[cur] + 1);
      if (--pending[succ] == 0) ready.push_back(succ);
    }
  }
  if (processed != sft.nodes().size())
    throw ModelError("cannot order microservices: the tree contains a cycle");

  std::vector<MicroserviceId> order;
  order.reserve(sft.nodes().size());
  for (const auto& n : sft.nodes()) order.push_back(n.id);
  std::stable_sort(order.begin(), order.end(),
                   [&](const MicroserviceId& x, const MicroserviceId& y) {
                     return std::tie(level[x], x) < std::tie(level[y], y);
                   });
  return order;
}

PlacementCheck place_on_device(const Microservice& m, const FogDevice& d,
                               const PhysicalNetwork& pn, const ServiceFunctionTree& sft,
                               const std::map<MicroserviceId, DeviceId>& placements,
                               const LinkUsage& usage, const SolverConfig& config) {
  PlacementCheck res;
  res.usage = usage;

  if (m.required_sensor_count > 0) {
    if (!has_required_sensors(d, m.eligible_sensors, m.required_sensor_count)) return res;
    res.covers_sensors = true;
  }

  if (!is_resource_compatible(d, m.required_capacity, placements, sft)) return res;

  ConnectivityCheck cc =
      validate_connectivity_and_link_speed(pn, sft, m.id, d.id, placements, usage, config.h_max);
  if (!cc.ok) return res;

  res.valid = true;
  res.usage = std::move(cc.usage);
  res.paths = std::move(cc.paths);
  return res;
}

ExtendedSearchResult extended_search(const Microservice& m, const PhysicalNetwork& pn,
                                     const ServiceFunctionTree& sft,
                                     const std::map<MicroserviceId, DeviceId>& placements,
                                     const LinkUsage& usage,
                                     const std::vector<DeviceId>& sensor_covering,
                                     const SolverConfig& config,
                                     const std::set<DeviceId>& excluded_hosts) {
  ExtendedSearchResult res;
  res.usage = usage;

  const SpeedUnits stream = required_forwarding_speed(m, config);
  const std::set<DeviceId> covering(sensor_covering.begin(), sensor_covering.end());

  int best = std::numeric_limits<int>::max();
  struct QueueItem {
    DeviceId device;
    int dist;
    std::vector<DeviceId> tail; // path after the origin
  };

  // Ripple out from each covering device in discovery order, keeping the
  // globally closest workable host. Every candidate's forwarding path is
  // validated against the ledger as it stood before this placement
  // attempt, so competing candidates never see each other's charges.
  for (const auto& origin : sensor_covering) {
    std::set<DeviceId> visited;
    std::deque<QueueItem> queue{{origin, 0, {}}};
    while (!queue.empty()) {
      QueueItem item = std::move(queue.front());
      queue.pop_front();
      if (!visited.insert(item.device).second) continue;

      if (is_resource_compatible(pn.device(item.device), m.required_capacity, placements, sft)) {
        std::vector<DeviceId> full{origin};
        full.insert(full.end(), item.tail.begin(), item.tail.end());
        ExtendedPathCheck pc = validate_extended_path(pn, full, stream, usage);
        if (pc.ok && item.dist < best && !covering.count(item.device) &&
            !excluded_hosts.count(item.device)) {
          best = item.dist;
          res.valid = true;
          res.host = item.device;
          res.selected_sensor_device = origin;
          res.path = std::move(full);
          res.usage = std::move(pc.usage);
          break; // this origin cannot do better; try the next one
        }
      }

      if (item.dist + 1 > config.h_max) continue; // hosts beyond the hop bound are useless
      for (const auto& nb : pn.neighbors(item.device)) {
        if (visited.count(nb)) continue;
        QueueItem next{nb, item.dist + 1, item.tail};
        next.tail.push_back(nb);
        queue.push_back(std::move(next));
      }
    }
  }

  return res;
}

namespace {

class TreeMapper {
public:
  TreeMapper(const ServiceFunctionTree& sft, const PhysicalNetwork& pn,
             const SolverConfig& config, const SolveHooks* hooks)
      : sft_(sft), pn_(pn), config_(config), hooks_(hooks) {
    order_ = placement_order(sft);
    for (const auto& d : pn.devices()) sweep_.push_back(d.id);
    if (config.device_order == DeviceOrder::DescendingId)
      std::reverse(sweep_.begin(), sweep_.end());
    for (const auto& id : order_) excluded_[id];
  }

  MappingResult run() {
    MappingResult result;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = solve_from(0, LinkUsage{});
    result.stats = stats_;
    result.stats.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::steady_clock::now() - t0);
    result.success = ok;
    if (ok) {
      result.mapping.placements = placements_;
      result.mapping.reserved_paths = reserved_;
      result.mapping.forwarding = forwarding_;
      result.final_link_usage = final_usage_;
    }
    return result;
  }

private:
  bool solve_from(std::size_t idx, const LinkUsage& usage) {
    if (idx == order_.size()) {
      final_usage_ = usage;
      return true;
    }

    const Microservice& m = sft_.node(order_[idx]);
    std::vector<DeviceId> covering;       // sensor-covering devices, discovery order
    std::set<DeviceId> forwarding_failed; // fallback hosts whose subtree failed
    bool fallback_dry = false;            // a search with the current exclusions found nothing

    for (std::size_t i = 0; i < sweep_.size(); ++i) {
      const DeviceId& d = sweep_[i];
      if (excluded_[m.id].count(d)) continue;

      ++stats_.attempts;
      PlacementCheck pc =
          place_on_device(m, pn_.device(d), pn_, sft_, placements_, usage, config_);
      if (pc.covers_sensors) covering.push_back(d);

      bool valid = pc.valid;
      DeviceId host = d;
      LinkUsage next = std::move(pc.usage);
      std::vector<ReservedPath> paths = std::move(pc.paths);
      std::optional<ForwardingRecord> fwd;

      // Direct placement failed everywhere: once the sweep reaches its last
      // device, fall back to forwarding the sensor stream toward a host
      // further out (only meaningful for sensor-demanding leaves that saw
      // at least one covering device).
      if (!valid && i + 1 == sweep_.size() && m.required_sensor_count > 0 &&
          !covering.empty()) {
        ++stats_.extended_searches;
        ExtendedSearchResult es = extended_search(m, pn_, sft_, placements_, usage, covering,
                                                  config_, forwarding_failed);
        if (es.valid) {
          valid = true;
          host = es.host;
          next = std::move(es.usage);
          paths.clear();
          fwd = ForwardingRecord{m.id, es.selected_sensor_device, es.host,
                                 required_forwarding_speed(m, config_), es.path};
        } else {
          fallback_dry = true;
        }
      }

      if (!valid) {
        excluded_[m.id].insert(d);
        continue;
      }

      const bool forwarded = fwd.has_value();
      if (try_commit(idx, m.id, host, usage, next, paths, fwd)) return true;
      if (forwarded) forwarding_failed.insert(host);
    }

    // The sweep is over and m is still unmapped. For a sensor-demanding
    // leaf that is not yet the end of the line: direct placements that
    // looked fine above may have failed deeper in the tree, and the
    // fallback search above only ran when the last device's own attempt
    // was invalid. Walk the remaining forwarding hosts in distance order
    // until one of them carries the rest of the tree or the search runs
    // dry.
    if (m.required_sensor_count > 0 && !covering.empty()) {
      while (!fallback_dry) {
        ++stats_.extended_searches;
        ExtendedSearchResult es = extended_search(m, pn_, sft_, placements_, usage, covering,
                                                  config_, forwarding_failed);
        if (!es.valid) break;
        ForwardingRecord fwd{m.id, es.selected_sensor_device, es.host,
                             required_forwarding_speed(m, config_), es.path};
        if (try_commit(idx, m.id, es.host, usage, es.usage, {}, fwd)) return true;
        forwarding_failed.insert(es.host);
      }
    }

    return false;
  }

  // Records the placement, recurses into the rest of the tree, and on
  // failure restores every piece of search state (the caller decides what
  // to exclude next).
  bool try_commit(std::size_t idx, const MicroserviceId& mid, const DeviceId& host,
                  const LinkUsage& usage, const LinkUsage& next,
                  const std::vector<ReservedPath>& paths,
                  const std::optional<ForwardingRecord>& fwd) {
    SolverState before;
    if (hooks_ && hooks_->on_backtrack) before = capture(usage);

    placements_[mid] = host;
    const std::size_t n_paths = reserved_.size();
    const std::size_t n_fwd = forwarding_.size();
    reserved_.insert(reserved_.end(), paths.begin(), paths.end());
    if (fwd) forwarding_.push_back(*fwd);

    if (solve_from(idx + 1, next)) return true;

    placements_.erase(mid);
    reserved_.resize(n_paths);
    forwarding_.resize(n_fwd);
    ++stats_.backtracks;
    excluded_[mid].insert(host);
    // The reverted placement invalidates whatever the deeper levels
    // learned about unusable devices; their exclusions start over.
    for (std::size_t j = idx + 1; j < order_.size(); ++j) excluded_[order_[j]].clear();

    if (hooks_ && hooks_->on_backtrack) hooks_->on_backtrack(mid, host, before, capture(usage));
    return false;
  }

  SolverState capture(const LinkUsage& usage) const {
    SolverState st;
    st.placements = placements_;
    for (const auto& dev : pn_.devices())
      st.remaining_units[dev.id] = remaining_capacity(dev, placements_, sft_).units;
    st.usage = usage;
    st.reserved_paths = reserved_;
    st.forwarding = forwarding_;
    return st;
  }

  const ServiceFunctionTree& sft_;
  const PhysicalNetwork& pn_;
  const SolverConfig& config_;
  const SolveHooks* hooks_;

  std::vector<MicroserviceId> order_;
  std::vector<DeviceId> sweep_;
  ExclusionSets excluded_;
  std::map<MicroserviceId, DeviceId> placements_;
  std::vector<ReservedPath> reserved_;
  std::vector<ForwardingRecord> forwarding_;
  LinkUsage final_usage_;
  SolveStats stats_;
};

} // namespace

MappingResult map_tree_to_network(const ServiceFunctionTree& sft, const PhysicalNetwork& pn,
                                  const SolverConfig& config, const SolveHooks* hooks) {
  TreeMapper mapper(sft, pn, config, hooks);
  return mapper.run();
}

} // namespace sftm
