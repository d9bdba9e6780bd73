#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "sftm/constraints.hpp"
#include "sftm/errors.hpp"
#include "sftm/generator.hpp"
#include "sftm/model.hpp"
#include "sftm/scenario.hpp"

using namespace sftm;
using tst::dev;
using tst::edge;
using tst::leaf;
using tst::link;
using tst::ms;

namespace {

bool mentions(const std::vector<SftDefect>& defects, const std::string& subject,
              const std::string& fragment) {
  return std::any_of(defects.begin(), defects.end(), [&](const SftDefect& d) {
    return d.subject == subject && d.detail.find(fragment) != std::string::npos;
  });
}

bool mentions(const std::vector<std::string>& issues, const std::string& fragment) {
  return std::any_of(issues.begin(), issues.end(), [&](const std::string& s) {
    return s.find(fragment) != std::string::npos;
  });
}

} // namespace

TEST_CASE("capacity and speed units compare by size") {
  CHECK(CapacityUnits::small() < CapacityUnits::big());
  CHECK(CapacityUnits::small().units == 1);
  CHECK(CapacityUnits::big().units == 2);
  CHECK(SpeedUnits::slow().units == 1);
  CHECK(SpeedUnits::fast().units == 2);
  CHECK(SpeedUnits{} == SpeedUnits::slow());
  CHECK(SpeedUnits::slow() < SpeedUnits::fast());
}

TEST_CASE("link keys normalize endpoint order") {
  LinkKey k("d2", "d1");
  CHECK(k.a == "d1");
  CHECK(k.b == "d2");
  CHECK(k == LinkKey("d1", "d2"));
  CHECK(LinkKey("a", "b") < LinkKey("a", "c"));
}

TEST_CASE("physical network sorts, indexes and answers lookups") {
  PhysicalNetwork pn({dev("d3", 1), dev("d1", 2, {"s1"}), dev("d2", 1)},
                     {link("d3", "d2", 2), link("d1", "d2", 1)});

  REQUIRE(pn.devices().size() == 3);
  CHECK(pn.devices()[0].id == "d1");
  CHECK(pn.devices()[2].id == "d3");
  CHECK(pn.links()[0].key == LinkKey("d1", "d2"));

  CHECK(pn.has_device("d2"));
  CHECK_FALSE(pn.has_device("dx"));
  CHECK(pn.find_device("dx") == nullptr);
  CHECK(pn.device("d1").capacity == CapacityUnits::big());
  CHECK_THROWS_AS(pn.device("dx"), ModelError);

  CHECK(pn.neighbors("d2") == std::vector<DeviceId>{"d1", "d3"});
  CHECK(pn.neighbors("d1") == std::vector<DeviceId>{"d2"});

  CHECK(pn.link_capacity("d2", "d3") == SpeedUnits::fast());
  CHECK(pn.link_capacity("d3", "d2") == SpeedUnits::fast());
  CHECK_FALSE(pn.link_capacity("d1", "d3").has_value());
}

TEST_CASE("physical network rejects referential breakage") {
  CHECK_THROWS_AS(PhysicalNetwork({dev("d1", 1), dev("d1", 2)}, {}), ModelError);
  CHECK_THROWS_AS(PhysicalNetwork({dev("", 1)}, {}), ModelError);
  CHECK_THROWS_AS(PhysicalNetwork({dev("d1", -1)}, {}), ModelError);
  CHECK_THROWS_AS(PhysicalNetwork({dev("d1", 1)}, {link("d1", "d1", 1)}), ModelError);
  CHECK_THROWS_AS(PhysicalNetwork({dev("d1", 1)}, {link("d1", "d2", 1)}), ModelError);
  CHECK_THROWS_AS(PhysicalNetwork({dev("d1", 1), dev("d2", 1)}, {link("d1", "d2", 0)}),
                  ModelError);
  // The same link twice, even written in opposite orientations.
  CHECK_THROWS_AS(
      PhysicalNetwork({dev("d1", 1), dev("d2", 1)}, {link("d1", "d2", 1), link("d2", "d1", 2)}),
      ModelError);
}

TEST_CASE("tree construction sorts nodes and edges and indexes adjacency") {
  ServiceFunctionTree sft(
      {ms("m3", MicroserviceKind::EventHandler, 2),
       leaf("m1", MicroserviceKind::Filter, 1, "temperature", {"s1"}, 1),
       ms("m2", MicroserviceKind::Aggregator, 1)},
      {edge("m2", "m3", 2), edge("m1", "m2", 1)});

  CHECK(sft.nodes()[0].id == "m1");
  CHECK(sft.edges()[0].from == "m1");
  CHECK(sft.predecessors("m3") == std::vector<MicroserviceId>{"m2"});
  CHECK(sft.successors("m1") == std::vector<MicroserviceId>{"m2"});
  CHECK(sft.is_leaf("m1"));
  CHECK_FALSE(sft.is_leaf("m2"));
  REQUIRE(sft.find_edge("m1", "m2") != nullptr);
  CHECK(sft.find_edge("m1", "m2")->required_speed == SpeedUnits::slow());
  CHECK(sft.find_edge("m2", "m1") == nullptr);
  CHECK_THROWS_AS(sft.node("mx"), ModelError);
}

TEST_CASE("tree construction rejects referential breakage") {
  CHECK_THROWS_AS(ServiceFunctionTree({ms("m1", MicroserviceKind::Filter, 1),
                                       ms("m1", MicroserviceKind::Filter, 1)},
                                      {}),
                  ModelError);
  CHECK_THROWS_AS(ServiceFunctionTree({ms("m1", MicroserviceKind::Filter, 1)},
                                      {edge("m1", "m1", 1)}),
                  ModelError);
  CHECK_THROWS_AS(ServiceFunctionTree({ms("m1", MicroserviceKind::Filter, 1)},
                                      {edge("m1", "m2", 1)}),
                  ModelError);
  CHECK_THROWS_AS(ServiceFunctionTree({ms("m1", MicroserviceKind::Filter, 1),
                                       ms("m2", MicroserviceKind::EventHandler, 1)},
                                      {edge("m1", "m2", 1), edge("m1", "m2", 2)}),
                  ModelError);
}

TEST_CASE("well-formed audit accepts a clean three-stage chain") {
  ServiceFunctionTree sft({leaf("m1", MicroserviceKind::Filter, 1, "temperature", {"s1", "s2"}, 1),
                           ms("m2", MicroserviceKind::Aggregator, 1),
                           ms("m3", MicroserviceKind::EventHandler, 2)},
                          {edge("m1", "m2", 1), edge("m2", "m3", 2)});
  CHECK(sft_well_formed(sft).empty());
}

TEST_CASE("well-formed audit accepts the six-node two-level fan-in") {
  ServiceFunctionTree sft(
      {leaf("m1", MicroserviceKind::Filter, 1, "temperature", {"s1", "s2"}, 2),
       leaf("m2", MicroserviceKind::Filter, 2, "visual", {"v1"}, 1),
       ms("m3", MicroserviceKind::Aggregator, 1),
       leaf("m4", MicroserviceKind::Filter, 1, "wind", {"w1"}, 1),
       ms("m5", MicroserviceKind::Aggregator, 1),
       ms("m6", MicroserviceKind::EventHandler, 2)},
      {edge("m1", "m3", 1), edge("m2", "m3", 2), edge("m3", "m5", 2), edge("m4", "m5", 1),
       edge("m5", "m6", 2)});
  CHECK(sft_well_formed(sft).empty());
}

TEST_CASE("well-formed audit flags structural defects") {
  SUBCASE("empty tree") {
    CHECK_FALSE(sft_well_formed(ServiceFunctionTree({}, {})).empty());
  }

  SUBCASE("two sinks") {
    ServiceFunctionTree sft({leaf("m1", MicroserviceKind::Filter, 1, "wind", {"w1"}, 1),
                             ms("m2", MicroserviceKind::EventHandler, 1),
                             ms("m3", MicroserviceKind::EventHandler, 1)},
                            {edge("m1", "m2", 1)});
    auto defects = sft_well_formed(sft);
    CHECK(mentions(defects, "tree", "m2"));
    CHECK(mentions(defects, "tree", "m3"));
  }

  SUBCASE("sink is not an event handler") {
    ServiceFunctionTree sft({leaf("m1", MicroserviceKind::Filter, 1, "wind", {"w1"}, 1),
                             ms("m2", MicroserviceKind::Aggregator, 1)},
                            {edge("m1", "m2", 1)});
    CHECK(mentions(sft_well_formed(sft), "m2", "event handler"));
  }

  SUBCASE("filter with producers") {
    ServiceFunctionTree sft({leaf("m1", MicroserviceKind::Filter, 1, "wind", {"w1"}, 1),
                             ms("m2", MicroserviceKind::Filter, 1),
                             ms("m3", MicroserviceKind::EventHandler, 1)},
                            {edge("m1", "m2", 1), edge("m2", "m3", 1)});
    CHECK(mentions(sft_well_formed(sft), "m2", "filter"));
  }

  SUBCASE("aggregator without producers") {
    ServiceFunctionTree sft({ms("m1", MicroserviceKind::Aggregator, 1),
                             ms("m2", MicroserviceKind::EventHandler, 1)},
                            {edge("m1", "m2", 1)});
    CHECK(mentions(sft_well_formed(sft), "m1", "aggregator"));
  }

  SUBCASE("leaf without a sensor demand") {
    ServiceFunctionTree sft({ms("m1", MicroserviceKind::Filter, 1),
                             ms("m2", MicroserviceKind::EventHandler, 1)},
                            {edge("m1", "m2", 1)});
    CHECK(mentions(sft_well_formed(sft), "m1", "sensor"));
  }

  SUBCASE("non-leaf with a sensor demand") {
    Microservice agg = leaf("m2", MicroserviceKind::Aggregator, 1, "wind", {"w1"}, 1);
    ServiceFunctionTree sft({leaf("m1", MicroserviceKind::Filter, 1, "wind", {"w1"}, 1),
                             agg, ms("m3", MicroserviceKind::EventHandler, 1)},
                            {edge("m1", "m2", 1), edge("m2", "m3", 1)});
    CHECK(mentions(sft_well_formed(sft), "m2", "sensor"));
  }

  SUBCASE("demand larger than the eligible pool") {
    ServiceFunctionTree sft({leaf("m1", MicroserviceKind::Filter, 1, "wind", {"w1"}, 2),
                             ms("m2", MicroserviceKind::EventHandler, 1)},
                            {edge("m1", "m2", 1)});
    CHECK(mentions(sft_well_formed(sft), "m1", "eligible"));
  }

  SUBCASE("demand without a modality") {
    Microservice m1 = ms("m1", MicroserviceKind::Filter, 1);
    m1.eligible_sensors = {"w1"};
    m1.required_sensor_count = 1;
    ServiceFunctionTree sft({m1, ms("m2", MicroserviceKind::EventHandler, 1)},
                            {edge("m1", "m2", 1)});
    CHECK(mentions(sft_well_formed(sft), "m1", "modality"));
  }

  SUBCASE("non-positive edge speed") {
    ServiceFunctionTree sft({leaf("m1", MicroserviceKind::Filter, 1, "wind", {"w1"}, 1),
                             ms("m2", MicroserviceKind::EventHandler, 1)},
                            {edge("m1", "m2", 0)});
    CHECK(mentions(sft_well_formed(sft), "m1->m2", "speed"));
  }

  SUBCASE("cycle off to the side never reaches the sink") {
    ServiceFunctionTree sft({ms("m1", MicroserviceKind::Aggregator, 1),
                             ms("m2", MicroserviceKind::Aggregator, 1),
                             leaf("m3", MicroserviceKind::Filter, 1, "wind", {"w1"}, 1),
                             ms("m4", MicroserviceKind::EventHandler, 1)},
                            {edge("m1", "m2", 1), edge("m2", "m1", 1), edge("m3", "m4", 1)});
    auto defects = sft_well_formed(sft);
    CHECK(mentions(defects, "m1", "reach"));
    CHECK(mentions(defects, "m2", "reach"));
  }
}

TEST_CASE("remaining capacity tracks placements and refuses overload states") {
  ServiceFunctionTree sft({leaf("m1", MicroserviceKind::Filter, 1, "wind", {"w1"}, 1),
                           ms("m2", MicroserviceKind::Aggregator, 1),
                           ms("m3", MicroserviceKind::EventHandler, 1)},
                          {edge("m1", "m2", 1), edge("m2", "m3", 1)});
  FogDevice d = dev("d1", 2);

  CHECK(remaining_capacity(d, {}, sft) == CapacityUnits::big());
  CHECK(remaining_capacity(d, {{"m1", "d1"}, {"m2", "d2"}}, sft) == CapacityUnits::small());
  CHECK(remaining_capacity(d, {{"m1", "d1"}, {"m2", "d1"}}, sft) == CapacityUnits{0});

  CHECK_THROWS_AS(remaining_capacity(d, {{"m1", "d1"}, {"m2", "d1"}, {"m3", "d1"}}, sft),
                  ModelError);
  CHECK_THROWS_AS(remaining_capacity(d, {{"mx", "d1"}}, sft), ModelError);
}

TEST_CASE("modality defaults fill gaps without overriding explicit entries") {
  SolverConfig config;
  config.modality_link_requirement["visual"] = SpeedUnits::slow(); // deliberate non-default
  std::vector<Sensor> sensors = {{"t1", "temperature", "r1"},
                                 {"v1", "visual", "r1"},
                                 {"w1", "wind", "r2"}};
  apply_modality_defaults(config, sensors);

  CHECK(config.modality_link_requirement.at("visual") == SpeedUnits::slow());
  CHECK(config.modality_link_requirement.at("temperature") == SpeedUnits::slow());
  CHECK(config.modality_link_requirement.at("wind") == SpeedUnits::slow());

  SolverConfig fresh;
  apply_modality_defaults(fresh, sensors);
  CHECK(fresh.modality_link_requirement.at("visual") == SpeedUnits::fast());
}

TEST_CASE("scenario audit catches cross-reference problems") {
  Scenario base;
  base.sensors = {{"t1", "temperature", "r1"}, {"v1", "visual", "r1"}};
  base.network = PhysicalNetwork({dev("d1", 2, {"t1"}), dev("d2", 2, {"v1"})},
                                 {link("d1", "d2", 2)});
  base.sft = ServiceFunctionTree(
      {leaf("m1", MicroserviceKind::Filter, 1, "temperature", {"t1"}, 1),
       ms("m2", MicroserviceKind::EventHandler, 1)},
      {edge("m1", "m2", 1)});
  base.config = tst::config();
  REQUIRE(scenario_issues(base).empty());

  SUBCASE("duplicate sensor ids") {
    Scenario s = base;
    s.sensors.push_back({"t1", "temperature", "r2"});
    CHECK(mentions(scenario_issues(s), "t1"));
  }

  SUBCASE("device range pointing at an unknown sensor") {
    Scenario s = base;
    s.network = PhysicalNetwork({dev("d1", 2, {"ghost"}), dev("d2", 2)}, {link("d1", "d2", 2)});
    CHECK(mentions(scenario_issues(s), "ghost"));
  }

  SUBCASE("eligible sensor of the wrong modality") {
    Scenario s = base;
    s.sft = ServiceFunctionTree(
        {leaf("m1", MicroserviceKind::Filter, 1, "temperature", {"v1"}, 1),
         ms("m2", MicroserviceKind::EventHandler, 1)},
        {edge("m1", "m2", 1)});
    CHECK(mentions(scenario_issues(s), "modality"));
  }

  SUBCASE("eligible sensor that does not exist") {
    Scenario s = base;
    s.sft = ServiceFunctionTree(
        {leaf("m1", MicroserviceKind::Filter, 1, "temperature", {"nope"}, 1),
         ms("m2", MicroserviceKind::EventHandler, 1)},
        {edge("m1", "m2", 1)});
    CHECK(mentions(scenario_issues(s), "nope"));
  }

  SUBCASE("hop bound below one") {
    Scenario s = base;
    s.config.h_max = 0;
    CHECK(mentions(scenario_issues(s), "h_max"));
  }

  SUBCASE("modality missing from the link-requirement table") {
    Scenario s = base;
    s.config.modality_link_requirement.erase("visual");
    CHECK(mentions(scenario_issues(s), "visual"));
  }

  SUBCASE("reference mapping with unknown ids") {
    Scenario s = base;
    Mapping ref;
    ref.placements = {{"m1", "d1"}, {"m2", "dx"}, {"mx", "d1"}};
    s.reference_mapping = ref;
    auto issues = scenario_issues(s);
    CHECK(mentions(issues, "dx"));
    CHECK(mentions(issues, "mx"));
  }
}

TEST_CASE("built-in examples audit clean") {
  for (const Scenario& s : builtin_examples()) {
    CAPTURE(s.name);
    CHECK(scenario_issues(s).empty());
    CHECK(sft_well_formed(s.sft).empty());
  }
}
