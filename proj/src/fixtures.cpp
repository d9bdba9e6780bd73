#include <utility>

#include "sftm/generator.hpp"

namespace sftm {

namespace {

Sensor sensor(std::string id, std::string modality, std::string roi) {
  return Sensor{std::move(id), std::move(modality), std::move(roi)};
}

FogDevice device(std::string id, CapacityUnits cap, std::set<SensorId> range) {
  return FogDevice{std::move(id), cap, std::move(range)};
}

PhysicalLink link(std::string a, std::string b, SpeedUnits cap) {
  return PhysicalLink{LinkKey(std::move(a), std::move(b)), cap};
}

Microservice handler(std::string id, CapacityUnits cap) {
  return Microservice{std::move(id), MicroserviceKind::EventHandler, cap, {}, {}, 0};
}

Microservice aggregator(std::string id, CapacityUnits cap) {
  return Microservice{std::move(id), MicroserviceKind::Aggregator, cap, {}, {}, 0};
}

Microservice filter(std::string id, CapacityUnits cap, Modality modality,
                    std::set<SensorId> eligible, int count) {
  return Microservice{std::move(id), MicroserviceKind::Filter,
                      cap,           std::move(modality),
                      std::move(eligible), count};
}

// A lone event handler that needs two of three eligible temperature
// sensors; exactly one device is both Big and in range of two of them.
Scenario single_handler_choice() {
  Scenario s;
  s.name = "single-handler-choice";
  s.notes = "One event handler, five devices; only d3 covers two eligible sensors "
            "and has the capacity to host it. The chain layout and sensor ranges are "
            "one minimal arrangement with that outcome; the m1 -> d3 verdict is the "
            "contract, not the exact topology.";
  s.sensors = {
      sensor("t_s1", "temperature", "r1"), sensor("t_s2", "temperature", "r1"),
      sensor("t_s3", "temperature", "r1"), sensor("t_s4", "temperature", "r1"),
      sensor("t_s5", "temperature", "r1"),
  };
  s.network = PhysicalNetwork(
      {
          device("d1", CapacityUnits::big(), {"t_s1"}),
          device("d2", CapacityUnits::small(), {"t_s2"}),
          device("d3", CapacityUnits::big(), {"t_s2", "t_s4"}),
          device("d4", CapacityUnits::small(), {"t_s4"}),
          device("d5", CapacityUnits::big(), {"t_s5"}),
      },
      {
          link("d1", "d2", SpeedUnits::fast()),
          link("d2", "d3", SpeedUnits::fast()),
          link("d3", "d4", SpeedUnits::slow()),
          link("d4", "d5", SpeedUnits::fast()),
      });

  Microservice m1 = handler("m1", CapacityUnits::big());
  m1.required_modality = "temperature";
  m1.eligible_sensors = {"t_s2", "t_s4", "t_s5"};
  m1.required_sensor_count = 2;
  s.sft = ServiceFunctionTree({m1}, {});

  apply_modality_defaults(s.config, s.sensors);
  return s;
}

// Two-stage aggregation over three filters (temperature pair, one visual,
// one wind stream). The attached reference mapping is a placement that
// satisfies every constraint, including co-locating each aggregator with
// one of its producers.
Scenario six_service_pipeline() {
  Scenario s;
  s.name = "six-service-pipeline";
  s.notes = "Three filters feeding two aggregation stages; the reference mapping "
            "packs producers next to their consumers. Adjacency and sensor ranges "
            "are the smallest layout on which that mapping is valid; the verdict is "
            "the contract, not the exact topology.";
  s.sensors = {
      sensor("t_s1", "temperature", "r1"), sensor("t_s2", "temperature", "r1"),
      sensor("t_s3", "temperature", "r2"), sensor("v_s1", "visual", "r1"),
      sensor("v_s2", "visual", "r2"),      sensor("w_s1", "wind", "r2"),
  };
  s.network = PhysicalNetwork(
      {
          device("d1", CapacityUnits::big(), {"v_s1"}),
          device("d2", CapacityUnits::big(), {"t_s1", "t_s2"}),
          device("d3", CapacityUnits::big(), {"t_s3", "w_s1"}),
          device("d4", CapacityUnits::small(), {"t_s3"}),
          device("d5", CapacityUnits::big(), {"v_s2"}),
          device("d6", CapacityUnits::big(), {"t_s1"}),
          device("d7", CapacityUnits::small(), {"w_s1"}),
      },
      {
          link("d1", "d2", SpeedUnits::fast()),
          link("d2", "d3", SpeedUnits::fast()),
          link("d3", "d4", SpeedUnits::fast()),
          link("d3", "d5", SpeedUnits::fast()),
          link("d5", "d6", SpeedUnits::fast()),
          link("d6", "d7", SpeedUnits::fast()),
      });
  s.sft = ServiceFunctionTree(
      {
          filter("m1", CapacityUnits::small(), "temperature", {"t_s1", "t_s2", "t_s3"}, 2),
          filter("m2", CapacityUnits::big(), "visual", {"v_s1", "v_s2"}, 1),
          aggregator("m3", CapacityUnits::small()),
          filter("m4", CapacityUnits::small(), "wind", {"w_s1"}, 1),
          aggregator("m5", CapacityUnits::small()),
          handler("m6", CapacityUnits::big()),
      },
      {
          {"m1", "m3", SpeedUnits::slow()},
          {"m2", "m3", SpeedUnits::fast()},
          {"m3", "m5", SpeedUnits::fast()},
          {"m4", "m5", SpeedUnits::slow()},
          {"m5", "m6", SpeedUnits::fast()},
      });

  Mapping reference;
  reference.placements = {{"m1", "d2"}, {"m2", "d1"}, {"m3", "d2"},
                          {"m4", "d3"}, {"m5", "d3"}, {"m6", "d5"}};
  s.reference_mapping = std::move(reference);

  apply_modality_defaults(s.config, s.sensors);
  return s;
}

// Small pipeline whose attached placement overloads a Big device with
// three units and pushes a Fast tree edge over a Slow-only network; the
// validator must reject it. The scenario as a whole is infeasible: the
// final hop demands Fast service but no link provides it and no device
// can host both endpoints together.
Scenario overloaded_handoff() {
  Scenario s;
  s.name = "overloaded-handoff";
  s.notes = "Reference mapping stacks three units on d2 and saturates the Slow "
            "link (d2,d3); placing the handler on Small d3 overloads it too. The "
            "chain topology is the smallest layout exhibiting both failures, and "
            "those two violation classes are the contract, not the exact topology.";
  s.sensors = {
      sensor("t_s1", "temperature", "r1"),
      sensor("t_s2", "temperature", "r1"),
      sensor("v_s1", "visual", "r1"),
  };
  s.network = PhysicalNetwork(
      {
          device("d1", CapacityUnits::big(), {"v_s1"}),
          device("d2", CapacityUnits::big(), {"t_s1", "t_s2"}),
          device("d3", CapacityUnits::small(), {}),
          device("d4", CapacityUnits::small(), {}),
          device("d5", CapacityUnits::big(), {}),
          device("d6", CapacityUnits::small(), {}),
          device("d7", CapacityUnits::big(), {}),
      },
      {
          link("d1", "d2", SpeedUnits::slow()),
          link("d2", "d3", SpeedUnits::slow()),
          link("d3", "d4", SpeedUnits::slow()),
          link("d4", "d5", SpeedUnits::slow()),
          link("d5", "d6", SpeedUnits::slow()),
          link("d6", "d7", SpeedUnits::slow()),
      });
  s.sft = ServiceFunctionTree(
      {
          filter("m1", CapacityUnits::big(), "temperature", {"t_s1", "t_s2"}, 2),
          filter("m2", CapacityUnits::big(), "visual", {"v_s1"}, 1),
          aggregator("m3", CapacityUnits::small()),
          handler("m4", CapacityUnits::big()),
      },
      {
          {"m1", "m3", SpeedUnits::slow()},
          {"m2", "m3", SpeedUnits::slow()},
          {"m3", "m4", SpeedUnits::fast()},
      });

  Mapping reference;
  reference.placements = {{"m1", "d2"}, {"m2", "d1"}, {"m3", "d2"}, {"m4", "d3"}};
  s.reference_mapping = std::move(reference);

  apply_modality_defaults(s.config, s.sensors);
  return s;
}

} // namespace

std::vector<Scenario> builtin_examples() {
  return {single_handler_choice(), six_service_pipeline(), overloaded_handoff()};
}

} // namespace sftm
