#pragma once

#include <map>
#include <vector>

#include "sftm/model.hpp"

namespace sftm {

// Units already reserved per physical link. Plain value type: the solver
// snapshots it at branch points and hands copies down the recursion, so a
// failed branch leaves the caller's ledger untouched by construction.
class LinkUsage {
public:
  int used(const LinkKey& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second;
  }

  int used(const DeviceId& x, const DeviceId& y) const { return used(LinkKey(x, y)); }

  void add(const LinkKey& key, int units) {
    if (units != 0) entries_[key] += units;
  }

  void add(const DeviceId& x, const DeviceId& y, int units) { add(LinkKey(x, y), units); }

  // Charges `units` on every consecutive link of a device path; paths with
  // fewer than two devices consume nothing.
  void add_path(const std::vector<DeviceId>& path, int units) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i) add(path[i], path[i + 1], units);
  }

  const std::map<LinkKey, int>& entries() const noexcept { return entries_; }

  friend bool operator==(const LinkUsage&, const LinkUsage&) = default;

private:
  std::map<LinkKey, int> entries_;
};

} // namespace sftm
