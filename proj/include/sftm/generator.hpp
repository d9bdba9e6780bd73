#pragma once

#include <cstdint>

#include "sftm/scenario.hpp"

namespace sftm {

struct GenParams {
  int device_count = 5;
  int temperature_sensors = 8;
  int visual_sensors = 2;
  int wind_sensors = 1;
  int microservice_count = 3;

  std::uint64_t seed = 0;

  // Probability that a device is Big / a link is Fast / a tree edge
  // demands Fast.
  double big_device_prob = 0.5;
  double fast_link_prob = 0.5;
  double fast_edge_prob = 0.5;

  // Chance, per candidate pair beyond the spanning tree, of adding an
  // extra link. Scaled down with device count to keep densities sane.
  double extra_link_prob = 0.2;

  int h_max = 3;

  friend bool operator==(const GenParams&, const GenParams&) = default;
};

// Parameters for the benchmark profile named "paper": every count drawn
// uniformly from the profile's fixed ranges (devices 5..25, temperature
// 8..35, visual 2..11, wind 1..5, microservices 3..11) using the given
// seed.
GenParams paper_scale_params(std::uint64_t seed);

// True when params fall inside that profile's closed ranges.
bool within_paper_scale(const GenParams& params);

struct GeneratedNetwork {
  std::vector<Sensor> sensors;
  PhysicalNetwork network;
};

// Random fog network honoring the generation rules: connected (spanning
// tree plus extras), every device has at least one link and at least one
// sensor in range, at least one device sees several modalities, and at
// least one sensor sits in several devices' ranges. Deterministic per
// seed. Throws GenError on contradictory parameters (non-positive device
// count, no sensors at all, ...).
GeneratedNetwork generate_physical_network(const GenParams& params);

// Random microservice tree shaped from the depicted templates (chain for
// 3 nodes, two-filter fan-in for 4, the three-chain shape for 6, a seeded
// aggregator-backbone extension otherwise). Leaf demands draw modality,
// region and eligible sensors from the generated pool. Always well-formed.
// Throws GenError when microservice_count < 3 or the pool is unusable.
ServiceFunctionTree generate_sft(const GenParams& params, const GeneratedNetwork& net);

// Complete random scenario: network + tree + config (h_max from params,
// modality defaults applied), name derived from the seed.
Scenario generate_scenario(const GenParams& params);

// The three built-in worked examples as ready-to-solve scenarios:
// [0] single event handler choosing among sensor-covering devices,
// [1] six-service pipeline with its known-good placement attached as
//     reference_mapping,
// [2] overloaded placement whose reference mapping must fail validation
//     (resource overload plus a saturated link).
std::vector<Scenario> builtin_examples();

} // namespace sftm
