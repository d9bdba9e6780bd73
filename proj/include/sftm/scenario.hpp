#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sftm/mapping.hpp"
#include "sftm/model.hpp"

namespace sftm {

// Everything one problem instance needs: the sensor pool, the fog network,
// the microservice tree and the solver knobs, plus an optional
// hand-specified placement to audit.
struct Scenario {
  std::string name;
  std::string notes;
  std::vector<Sensor> sensors; // sorted by id
  PhysicalNetwork network;
  ServiceFunctionTree sft;
  SolverConfig config;
  std::optional<Mapping> reference_mapping;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Cross-reference audit over the assembled scenario: unique sensor ids,
// device ranges and leaf eligibility referencing known sensors, eligible
// sensors matching the leaf's declared modality, a positive hop bound, and
// a link-requirement entry for every modality in use. Structural tree
// defects from sft_well_formed are folded in. Empty result means coherent.
std::vector<std::string> scenario_issues(const Scenario& scenario);

} // namespace sftm
