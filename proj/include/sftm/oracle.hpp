#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sftm/mapping.hpp"
#include "sftm/model.hpp"

namespace sftm {

struct OracleOptions {
  // Stop after this many witnesses. When set, the explosion cap below is
  // not enforced (the caller accepts a potentially long scan).
  std::optional<std::uint64_t> limit;
  // Refuse enumeration when |devices|^|microservices| exceeds this.
  std::uint64_t explosion_cap = 10'000'000;
};

// Exhaustive reference enumeration, independent of the backtracking
// solver: walks every total placement vector in lexicographic order
// (microservices ascending, devices ascending), synthesizes forwarding and
// edge routes with fixed deterministic rules, and keeps the placements
// that satisfy every constraint. Each returned mapping passes
// validate_full_mapping with no violations. The witness set depends only
// on the scenario, never on enumeration order. Throws ExplosionCapError
// when the space is too large and no limit was given.
std::vector<Mapping> enumerate_valid_mappings(const PhysicalNetwork& pn,
                                              const ServiceFunctionTree& sft,
                                              const SolverConfig& config,
                                              const OracleOptions& options = {});

// True when at least one valid mapping exists; short-circuits on the
// first witness. Same explosion-cap rule as above.
bool oracle_feasible(const PhysicalNetwork& pn, const ServiceFunctionTree& sft,
                     const SolverConfig& config, std::uint64_t explosion_cap = 10'000'000);

} // namespace sftm
