#pragma once

#include <compare>

namespace sftm {

// Device capacity in integer units. The two-level vocabulary from the
// scenarios maps to Small = 1 unit and Big = 2 units; any non-negative
// size is accepted so generalized scenarios keep working.
struct CapacityUnits {
  int units = 0;

  static constexpr CapacityUnits small() noexcept { return {1}; }
  static constexpr CapacityUnits big() noexcept { return {2}; }

  friend constexpr auto operator<=>(const CapacityUnits&, const CapacityUnits&) = default;
};

// Link speed in integer units: Slow = 1, Fast = 2. A physical link of
// capacity k can carry any set of flows whose required units sum to <= k,
// e.g. one Fast flow or two Slow flows on a Fast link.
struct SpeedUnits {
  int units = 1;

  static constexpr SpeedUnits slow() noexcept { return {1}; }
  static constexpr SpeedUnits fast() noexcept { return {2}; }

  friend constexpr auto operator<=>(const SpeedUnits&, const SpeedUnits&) = default;
};

} // namespace sftm
