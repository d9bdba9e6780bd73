#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sftm/constraints.hpp"
#include "sftm/mapping.hpp"
#include "sftm/scenario.hpp"

namespace sftm {

// Scenario documents. Loading is strict: unknown fields, duplicate ids,
// bad unit values and tree defects are all reported (ParseError for
// syntax/schema problems with line context, ScenarioError carrying the
// full issue list for semantic ones). Loading also fills the modality
// link-requirement defaults so downstream lookups cannot miss.
Scenario load_scenario(const std::filesystem::path& path);
Scenario scenario_from_json_text(const std::string& text, const std::string& origin = "<input>");
std::string scenario_to_json_text(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

// Mapping documents (placements plus optional reserved paths/forwarding).
Mapping load_mapping(const std::filesystem::path& path);
Mapping mapping_from_json_text(const std::string& text, const std::string& origin = "<input>");
std::string mapping_to_json_text(const Mapping& mapping);
void save_mapping(const Mapping& mapping, const std::filesystem::path& path);

// All witnesses of an enumeration as one document: {"mappings": [...]}.
std::string mappings_to_json_text(const std::vector<Mapping>& mappings);

// FNV-1a 64 over the canonical serialization, rendered "fnv1a64:<16 hex>".
// Whitespace/formatting of the source file does not affect it.
std::string scenario_digest(const Scenario& scenario);

struct DeviceLoadRow {
  DeviceId device;
  int capacity_units = 0;
  int used_units = 0;

  friend bool operator==(const DeviceLoadRow&, const DeviceLoadRow&) = default;
};

struct LinkUsageRow {
  LinkKey link;
  int capacity_units = 0;
  int used_units = 0;

  friend bool operator==(const LinkUsageRow&, const LinkUsageRow&) = default;
};

// Solve/validate outcome summary. Serialization is deliberately free of
// wall-clock data so identical runs produce identical bytes.
struct Report {
  std::string scenario_name;
  std::string digest;
  bool success = false;
  SolveStats stats;
  Mapping mapping;
  std::vector<Violation> violations;
  std::vector<DeviceLoadRow> device_loads;   // ascending device id
  std::vector<LinkUsageRow> link_usage;      // ascending link key
  std::vector<DeviceId> forwarding_devices;  // devices relaying sensor streams, ascending
};

// Assembles the derived tables (loads, link usage, forwarding devices)
// from a finished mapping against its scenario.
Report build_report(const Scenario& scenario, bool success, const SolveStats& stats,
                    const Mapping& mapping, const std::vector<Violation>& violations);

std::string report_to_json_text(const Report& report);
void save_report(const Report& report, const std::filesystem::path& path);

} // namespace sftm
