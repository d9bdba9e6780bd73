#pragma once

// Shorthand builders shared by the test suites. Tests construct a lot of
// tiny networks and trees; these keep each case readable.

#include <set>
#include <string>
#include <vector>

#include "sftm/model.hpp"

namespace tst {

inline sftm::FogDevice dev(std::string id, int units, std::set<sftm::SensorId> in_range = {}) {
  return {std::move(id), sftm::CapacityUnits{units}, std::move(in_range)};
}

inline sftm::PhysicalLink link(const std::string& a, const std::string& b, int units) {
  return {sftm::LinkKey(a, b), sftm::SpeedUnits{units}};
}

inline sftm::Microservice ms(std::string id, sftm::MicroserviceKind kind, int units) {
  sftm::Microservice m;
  m.id = std::move(id);
  m.kind = kind;
  m.required_capacity = sftm::CapacityUnits{units};
  return m;
}

inline sftm::Microservice leaf(std::string id, sftm::MicroserviceKind kind, int units,
                               sftm::Modality modality, std::set<sftm::SensorId> eligible,
                               int count) {
  sftm::Microservice m = ms(std::move(id), kind, units);
  m.required_modality = std::move(modality);
  m.eligible_sensors = std::move(eligible);
  m.required_sensor_count = count;
  return m;
}

inline sftm::SftEdge edge(std::string from, std::string to, int units) {
  return {std::move(from), std::move(to), sftm::SpeedUnits{units}};
}

// h_max plus the standard modality table (visual fast, the rest slow).
inline sftm::SolverConfig config(int h_max = 3) {
  sftm::SolverConfig c;
  c.h_max = h_max;
  c.modality_link_requirement = {{"temperature", sftm::SpeedUnits::slow()},
                                 {"visual", sftm::SpeedUnits::fast()},
                                 {"wind", sftm::SpeedUnits::slow()}};
  return c;
}

// n devices d1..dn of the given capacity chained with identical links.
inline sftm::PhysicalNetwork chain(int n, int device_units, int link_units) {
  std::vector<sftm::FogDevice> devices;
  std::vector<sftm::PhysicalLink> links;
  for (int i = 1; i <= n; ++i) devices.push_back(dev("d" + std::to_string(i), device_units));
  for (int i = 1; i < n; ++i)
    links.push_back(link("d" + std::to_string(i), "d" + std::to_string(i + 1), link_units));
  return sftm::PhysicalNetwork(std::move(devices), std::move(links));
}

} // namespace tst
