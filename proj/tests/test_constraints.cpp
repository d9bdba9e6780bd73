#include <doctest.h>

#include <optional>
#include <random>
#include <set>
#include <vector>

#include "helpers.hpp"
#include "sftm/constraints.hpp"
#include "sftm/errors.hpp"

using namespace sftm;
using tst::dev;
using tst::edge;
using tst::leaf;
using tst::link;
using tst::ms;

namespace {

// Reference path search for cross-checking find_feasible_path: enumerate
// every simple path by DFS and keep the shortest, breaking length ties
// toward the lexicographically smaller id sequence. Exponential, so only
// used on tiny networks.
void all_paths(const PhysicalNetwork& pn, std::vector<DeviceId>& cur, std::set<DeviceId>& seen,
               const DeviceId& to, SpeedUnits required, const LinkUsage& usage, int h_max,
               std::optional<std::vector<DeviceId>>& best) {
  if (cur.back() == to) {
    if (!best || cur.size() < best->size() || (cur.size() == best->size() && cur < *best))
      best = cur;
    return;
  }
  if (static_cast<int>(cur.size()) - 1 >= h_max) return;
  for (const DeviceId& nb : pn.neighbors(cur.back())) {
    if (seen.count(nb)) continue;
    auto cap = pn.link_capacity(cur.back(), nb);
    if (!cap || cap->units - usage.used(cur.back(), nb) < required.units) continue;
    seen.insert(nb);
    cur.push_back(nb);
    all_paths(pn, cur, seen, to, required, usage, h_max, best);
    cur.pop_back();
    seen.erase(nb);
  }
}

std::optional<std::vector<DeviceId>> reference_path(const PhysicalNetwork& pn,
                                                    const DeviceId& from, const DeviceId& to,
                                                    SpeedUnits required, const LinkUsage& usage,
                                                    int h_max) {
  std::vector<DeviceId> cur{from};
  std::set<DeviceId> seen{from};
  std::optional<std::vector<DeviceId>> best;
  all_paths(pn, cur, seen, to, required, usage, h_max, best);
  return best;
}

} // namespace

TEST_CASE("sensor coverage counts eligible sensors in range") {
  FogDevice d = dev("d1", 2, {"s1", "s2", "x9"});
  CHECK(has_required_sensors(d, {"s1", "s2", "s3"}, 2));
  CHECK_FALSE(has_required_sensors(d, {"s1", "s2", "s3"}, 3));
  CHECK(has_required_sensors(d, {"s3"}, 0));
  CHECK(has_required_sensors(d, {}, 0));
  CHECK_FALSE(has_required_sensors(d, {}, 1));
}

TEST_CASE("resource compatibility respects current placements") {
  ServiceFunctionTree sft({leaf("m1", MicroserviceKind::Filter, 1, "wind", {"w1"}, 1),
                           ms("m2", MicroserviceKind::Aggregator, 2),
                           ms("m3", MicroserviceKind::EventHandler, 1)},
                          {edge("m1", "m2", 1), edge("m2", "m3", 1)});
  FogDevice big = dev("d1", 2);

  CHECK(is_resource_compatible(big, CapacityUnits::big(), {}, sft));
  CHECK(is_resource_compatible(big, CapacityUnits::small(), {{"m1", "d1"}}, sft));
  CHECK_FALSE(is_resource_compatible(big, CapacityUnits::big(), {{"m1", "d1"}}, sft));
  CHECK_FALSE(is_resource_compatible(big, CapacityUnits::small(), {{"m1", "d1"}, {"m3", "d1"}},
                                     sft));
  // Placements on other devices do not count against d1.
  CHECK(is_resource_compatible(big, CapacityUnits::big(), {{"m1", "d2"}}, sft));
  // Zero-demand placements always fit.
  CHECK(is_resource_compatible(big, CapacityUnits{0}, {{"m1", "d1"}, {"m3", "d1"}}, sft));
}

TEST_CASE("path search finds the shortest residual-feasible route") {
  // Ring of five, all slow links.
  PhysicalNetwork ring({dev("d1", 1), dev("d2", 1), dev("d3", 1), dev("d4", 1), dev("d5", 1)},
                       {link("d1", "d2", 1), link("d2", "d3", 1), link("d3", "d4", 1),
                        link("d4", "d5", 1), link("d1", "d5", 1)});
  LinkUsage empty;

  SUBCASE("degenerate endpoints") {
    auto p = find_feasible_path(ring, "d3", "d3", SpeedUnits::slow(), empty, 3);
    REQUIRE(p.has_value());
    CHECK(*p == std::vector<DeviceId>{"d3"});
  }

  SUBCASE("direct link wins") {
    auto p = find_feasible_path(ring, "d1", "d2", SpeedUnits::slow(), empty, 3);
    REQUIRE(p.has_value());
    CHECK(*p == std::vector<DeviceId>{"d1", "d2"});
  }

  SUBCASE("saturated direct link forces the long way round") {
    LinkUsage used;
    used.add("d1", "d2", 1);
    auto p = find_feasible_path(ring, "d1", "d2", SpeedUnits::slow(), used, 4);
    REQUIRE(p.has_value());
    CHECK(*p == std::vector<DeviceId>{"d1", "d5", "d4", "d3", "d2"});

    CHECK_FALSE(find_feasible_path(ring, "d1", "d2", SpeedUnits::slow(), used, 3).has_value());
  }

  SUBCASE("demand above the link size is infeasible even on idle links") {
    CHECK_FALSE(find_feasible_path(ring, "d1", "d2", SpeedUnits::fast(), empty, 4).has_value());
  }

  SUBCASE("equal-length routes resolve to the smaller id sequence") {
    PhysicalNetwork diamond({dev("d1", 1), dev("d2", 1), dev("d3", 1), dev("d4", 1)},
                            {link("d1", "d2", 1), link("d2", "d4", 1), link("d1", "d3", 1),
                             link("d3", "d4", 1)});
    auto p = find_feasible_path(diamond, "d1", "d4", SpeedUnits::slow(), empty, 3);
    REQUIRE(p.has_value());
    CHECK(*p == std::vector<DeviceId>{"d1", "d2", "d4"});
  }

  SUBCASE("partial residual still admits a slow flow") {
    PhysicalNetwork pair({dev("d1", 1), dev("d2", 1)}, {link("d1", "d2", 2)});
    LinkUsage half;
    half.add("d1", "d2", 1);
    auto p = find_feasible_path(pair, "d1", "d2", SpeedUnits::slow(), half, 1);
    CHECK(p.has_value());
    CHECK_FALSE(find_feasible_path(pair, "d1", "d2", SpeedUnits::fast(), half, 1).has_value());
  }
}

TEST_CASE("path search agrees with exhaustive enumeration on random networks") {
  std::mt19937 rng(20260819);
  for (int iter = 0; iter < 100; ++iter) {
    const int n = 2 + static_cast<int>(rng() % 7);
    std::vector<FogDevice> devices;
    for (int i = 1; i <= n; ++i) devices.push_back(dev("d" + std::to_string(i), 1));
    std::vector<PhysicalLink> links;
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        if (rng() % 10 < 4)
          links.push_back(link("d" + std::to_string(i), "d" + std::to_string(j),
                               1 + static_cast<int>(rng() % 2)));
    PhysicalNetwork pn(devices, links);

    LinkUsage usage;
    for (const auto& l : pn.links()) usage.add(l.key, static_cast<int>(rng() % 3));

    const DeviceId from = "d" + std::to_string(1 + rng() % n);
    const DeviceId to = "d" + std::to_string(1 + rng() % n);
    const SpeedUnits required{1 + static_cast<int>(rng() % 2)};
    const int h_max = 1 + static_cast<int>(rng() % 4);

    auto got = find_feasible_path(pn, from, to, required, usage, h_max);
    auto want = reference_path(pn, from, to, required, usage, h_max);
    CAPTURE(iter);
    CAPTURE(from);
    CAPTURE(to);
    REQUIRE(got.has_value() == want.has_value());
    if (got) CHECK(*got == *want);
  }
}

TEST_CASE("edge routing charges the chosen path and leaves failures untouched") {
  ServiceFunctionTree sft({leaf("m1", MicroserviceKind::Filter, 1, "wind", {"w1"}, 1),
                           ms("m2", MicroserviceKind::EventHandler, 1)},
                          {edge("m1", "m2", 2)});
  PhysicalNetwork pn({dev("d1", 1), dev("d2", 1), dev("d3", 1)},
                     {link("d1", "d2", 2), link("d2", "d3", 1)});
  LinkUsage empty;

  SUBCASE("co-location routes nothing") {
    PathCheck c = validate_path(pn, sft, "m1", "m2", "d2", "d2", empty, 3);
    CHECK(c.ok);
    CHECK(c.path == std::vector<DeviceId>{"d2"});
    CHECK(c.usage == empty);
  }

  SUBCASE("fast edge charges two units") {
    PathCheck c = validate_path(pn, sft, "m1", "m2", "d1", "d2", empty, 3);
    CHECK(c.ok);
    CHECK(c.path == std::vector<DeviceId>{"d1", "d2"});
    CHECK(c.usage.used("d1", "d2") == 2);
  }

  SUBCASE("fast edge does not fit a slow link and the ledger stays put") {
    PathCheck c = validate_path(pn, sft, "m1", "m2", "d2", "d3", empty, 3);
    CHECK_FALSE(c.ok);
    CHECK(c.usage == empty);
  }

  SUBCASE("unknown tree edge is a programming error") {
    CHECK_THROWS_AS(validate_path(pn, sft, "m2", "m1", "d1", "d2", empty, 3), ModelError);
  }
}

TEST_CASE("connectivity check routes all producers or rolls back entirely") {
  // m3 consumes from m1 (slow) and m2 (fast).
  ServiceFunctionTree sft({leaf("m1", MicroserviceKind::Filter, 1, "wind", {"w1"}, 1),
                           leaf("m2", MicroserviceKind::Filter, 1, "visual", {"v1"}, 1),
                           ms("m3", MicroserviceKind::EventHandler, 1)},
                          {edge("m1", "m3", 1), edge("m2", "m3", 2)});
  PhysicalNetwork pn({dev("d1", 1), dev("d2", 1), dev("d3", 1)},
                     {link("d1", "d3", 2), link("d2", "d3", 2)});
  LinkUsage empty;

  SUBCASE("vacuous with no placed producers") {
    ConnectivityCheck c =
        validate_connectivity_and_link_speed(pn, sft, "m3", "d3", {}, empty, 3);
    CHECK(c.ok);
    CHECK(c.paths.empty());
    CHECK(c.usage == empty);
  }

  SUBCASE("both producers route and charge") {
    ConnectivityCheck c = validate_connectivity_and_link_speed(
        pn, sft, "m3", "d3", {{"m1", "d1"}, {"m2", "d2"}}, empty, 3);
    CHECK(c.ok);
    REQUIRE(c.paths.size() == 2);
    CHECK(c.usage.used("d1", "d3") == 1);
    CHECK(c.usage.used("d2", "d3") == 2);
  }

  SUBCASE("one stuck producer rolls the whole attempt back") {
    LinkUsage used;
    used.add("d2", "d3", 1); // fast demand no longer fits
    ConnectivityCheck c = validate_connectivity_and_link_speed(
        pn, sft, "m3", "d3", {{"m1", "d1"}, {"m2", "d2"}}, used, 3);
    CHECK_FALSE(c.ok);
    CHECK(c.usage == used);
    CHECK(c.paths.empty());
  }

  SUBCASE("shared-link producers charge cumulatively") {
    // Both producers on d1: slow + fast over the same d1-d3 link needs 3 > 2.
    ConnectivityCheck c = validate_connectivity_and_link_speed(
        pn, sft, "m3", "d3", {{"m1", "d1"}, {"m2", "d1"}}, empty, 3);
    CHECK_FALSE(c.ok);
    CHECK(c.usage == empty);
  }
}

TEST_CASE("forwarding speed lookup uses the modality table") {
  SolverConfig cfg = tst::config();
  Microservice visual = leaf("m1", MicroserviceKind::Filter, 1, "visual", {"v1"}, 1);
  Microservice wind = leaf("m2", MicroserviceKind::Filter, 1, "wind", {"w1"}, 1);
  CHECK(required_forwarding_speed(visual, cfg) == SpeedUnits::fast());
  CHECK(required_forwarding_speed(wind, cfg) == SpeedUnits::slow());

  Microservice rain = leaf("m3", MicroserviceKind::Filter, 1, "rain", {"r1"}, 1);
  CHECK_THROWS_AS(required_forwarding_speed(rain, cfg), ConfigError);

  Microservice mute = ms("m4", MicroserviceKind::Aggregator, 1);
  CHECK_THROWS_AS(required_forwarding_speed(mute, cfg), ConfigError);
}

TEST_CASE("explicit forwarding paths validate hop by hop") {
  PhysicalNetwork pn({dev("d1", 1), dev("d2", 1), dev("d3", 1)},
                     {link("d1", "d2", 2), link("d2", "d3", 1)});
  LinkUsage empty;

  SUBCASE("single-element path is vacuously fine") {
    ExtendedPathCheck c = validate_extended_path(pn, {"d2"}, SpeedUnits::fast(), empty);
    CHECK(c.ok);
    CHECK(c.usage == empty);
  }

  SUBCASE("valid path charges every hop") {
    ExtendedPathCheck c =
        validate_extended_path(pn, {"d1", "d2", "d3"}, SpeedUnits::slow(), empty);
    CHECK(c.ok);
    CHECK(c.usage.used("d1", "d2") == 1);
    CHECK(c.usage.used("d2", "d3") == 1);
  }

  SUBCASE("a hop that is not a physical link fails cleanly") {
    ExtendedPathCheck c = validate_extended_path(pn, {"d1", "d3"}, SpeedUnits::slow(), empty);
    CHECK_FALSE(c.ok);
    CHECK(c.usage == empty);
  }

  SUBCASE("saturation midway rolls back the partial charges") {
    LinkUsage used;
    used.add("d2", "d3", 1);
    ExtendedPathCheck c =
        validate_extended_path(pn, {"d1", "d2", "d3"}, SpeedUnits::slow(), used);
    CHECK_FALSE(c.ok);
    CHECK(c.usage == used);
  }
}
