#pragma once

#include <string>

#include "sftm/mapping.hpp"
#include "sftm/model.hpp"

namespace sftm {

// Graphviz rendering of a solve outcome over its network: hosts yellow
// (labelled with their microservices), pure sensor-forwarding devices red,
// everything else the default light blue; edge labels count the Fast and
// Slow flows crossing each link. A failed result renders the bare network.
// Deterministic output; throws ModelError when the mapping references
// devices the network does not have.
std::string export_dot(const PhysicalNetwork& pn, const MappingResult& result);

} // namespace sftm
