#include "sftm/generator.hpp"

#include <algorithm>
#include <random>

#include "sftm/errors.hpp"

namespace sftm {

namespace {

// Thin wrapper over the engine so every draw goes through hand-rolled,
// implementation-pinned sampling; std::uniform_int_distribution is allowed
// to differ across standard libraries and would break seed stability.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  int uniform(int lo, int hi) { // inclusive bounds
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    const std::uint64_t reject_above = std::numeric_limits<std::uint64_t>::max() -
                                       std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t draw;
    do {
      draw = eng_();
    } while (draw >= reject_above);
    return lo + static_cast<int>(draw % span);
  }

  double unit() { return (eng_() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

private:
  std::mt19937_64 eng_;
};

std::string padded(const std::string& prefix, int index, int count) {
  std::string digits = std::to_string(index);
  const std::size_t width = std::to_string(count).size();
  while (digits.size() < width) digits.insert(digits.begin(), '0');
  return prefix + digits;
}

void check_params(const GenParams& p) {
  std::vector<std::string> problems;
  if (p.device_count < 1) problems.push_back("device_count must be at least 1");
  if (p.temperature_sensors < 0 || p.visual_sensors < 0 || p.wind_sensors < 0)
    problems.push_back("sensor counts must be non-negative");
  if (p.temperature_sensors + p.visual_sensors + p.wind_sensors < 1)
    problems.push_back("at least one sensor is required to cover the devices");
  for (double prob : {p.big_device_prob, p.fast_link_prob, p.fast_edge_prob, p.extra_link_prob})
    if (prob < 0.0 || prob > 1.0) problems.push_back("probabilities must lie in [0,1]");
  if (p.h_max < 1) problems.push_back("h_max must be at least 1");
  if (!problems.empty()) {
    std::string msg = "cannot generate scenario:";
    for (const auto& t : problems) msg += " " + t + ";";
    msg.pop_back();
    throw GenError(msg);
  }
}

int modality_variety(const GenParams& p) {
  return (p.temperature_sensors > 0) + (p.visual_sensors > 0) + (p.wind_sensors > 0);
}

} // namespace

GenParams paper_scale_params(std::uint64_t seed) {
  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
  GenParams p;
  p.device_count = rng.uniform(5, 25);
  p.temperature_sensors = rng.uniform(8, 35);
  p.visual_sensors = rng.uniform(2, 11);
  p.wind_sensors = rng.uniform(1, 5);
  p.microservice_count = rng.uniform(3, 11);
  p.seed = seed;
  return p;
}

bool within_paper_scale(const GenParams& p) {
  return p.device_count >= 5 && p.device_count <= 25 && p.temperature_sensors >= 8 &&
         p.temperature_sensors <= 35 && p.visual_sensors >= 2 && p.visual_sensors <= 11 &&
         p.wind_sensors >= 1 && p.wind_sensors <= 5 && p.microservice_count >= 3 &&
         p.microservice_count <= 11;
}

GeneratedNetwork generate_physical_network(const GenParams& params) {
  check_params(params);
  Rng rng(params.seed);

  GeneratedNetwork out;
  const int n = params.device_count;

  std::vector<FogDevice> devices(n);
  for (int i = 0; i < n; ++i) {
    devices[i].id = padded("d", i + 1, n);
    devices[i].capacity =
        rng.chance(params.big_device_prob) ? CapacityUnits::big() : CapacityUnits::small();
  }

  // Sensor pool with region tags; a couple of regions keeps leaf demands
  // from always spanning the whole pool.
  const int regions = std::clamp(n / 3, 1, 5);
  auto make_sensors = [&](const std::string& prefix, const Modality& modality, int count) {
    for (int i = 0; i < count; ++i) {
      Sensor s;
      s.id = padded(prefix, i + 1, count);
      s.modality = modality;
      s.roi = "r" + std::to_string(rng.uniform(1, regions));
      out.sensors.push_back(s);
    }
  };
  make_sensors("t_s", "temperature", params.temperature_sensors);
  make_sensors("v_s", "visual", params.visual_sensors);
  make_sensors("w_s", "wind", params.wind_sensors);

  // Each sensor lands in one to three device ranges.
  for (const auto& s : out.sensors) {
    int spots = 1 + (rng.chance(0.35) ? 1 : 0) + (rng.chance(0.15) ? 1 : 0);
    spots = std::min(spots, n);
    std::set<int> picked;
    while (static_cast<int>(picked.size()) < spots) picked.insert(rng.uniform(0, n - 1));
    for (int ix : picked) devices[ix].sensors_in_range.insert(s.id);
  }

  // Leftover devices with empty ranges adopt a random sensor.
  for (auto& d : devices) {
    if (d.sensors_in_range.empty())
      d.sensors_in_range.insert(
          out.sensors[rng.uniform(0, static_cast<int>(out.sensors.size()) - 1)].id);
  }

  // At least one device must observe several modalities.
  if (modality_variety(params) >= 2) {
    auto modality_of = [&](const SensorId& sid) -> const Modality& {
      for (const auto& s : out.sensors)
        if (s.id == sid) return s.modality;
      throw GenError("internal: unknown sensor id " + sid);
    };
    auto multi = std::any_of(devices.begin(), devices.end(), [&](const FogDevice& d) {
      std::set<Modality> seen;
      for (const auto& sid : d.sensors_in_range) seen.insert(modality_of(sid));
      return seen.size() >= 2;
    });
    if (!multi) {
      FogDevice& d = devices[rng.uniform(0, n - 1)];
      const Modality present = modality_of(*d.sensors_in_range.begin());
      std::vector<const Sensor*> others;
      for (const auto& s : out.sensors)
        if (s.modality != present) others.push_back(&s);
      d.sensors_in_range.insert(others[rng.uniform(0, static_cast<int>(others.size()) - 1)]->id);
    }
  }

  // And at least one sensor must sit in several devices' ranges.
  if (n >= 2) {
    std::map<SensorId, int> coverage;
    for (const auto& d : devices)
      for (const auto& sid : d.sensors_in_range) ++coverage[sid];
    bool shared = std::any_of(coverage.begin(), coverage.end(),
                              [](const auto& kv) { return kv.second >= 2; });
    if (!shared) {
      const Sensor& s = out.sensors[rng.uniform(0, static_cast<int>(out.sensors.size()) - 1)];
      std::vector<int> without;
      for (int i = 0; i < n; ++i)
        if (!devices[i].sensors_in_range.count(s.id)) without.push_back(i);
      devices[without[rng.uniform(0, static_cast<int>(without.size()) - 1)]]
          .sensors_in_range.insert(s.id);
    }
  }

  // Random spanning tree keeps everything connected and gives every device
  // a link; extra links thicken the graph with density that shrinks as the
  // network grows.
  std::vector<PhysicalLink> links;
  auto link_speed = [&]() {
    return rng.chance(params.fast_link_prob) ? SpeedUnits::fast() : SpeedUnits::slow();
  };
  for (int i = 1; i < n; ++i) {
    int parent = rng.uniform(0, i - 1);
    links.push_back({LinkKey(devices[parent].id, devices[i].id), link_speed()});
  }
  const double extra = params.extra_link_prob * 5.0 / std::max(5, n);
  std::set<LinkKey> present;
  for (const auto& l : links) present.insert(l.key);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      LinkKey key(devices[i].id, devices[j].id);
      if (present.count(key)) continue;
      if (rng.chance(extra)) {
        links.push_back({key, link_speed()});
        present.insert(key);
      }
    }
  }

  out.network = PhysicalNetwork(std::move(devices), std::move(links));
  return out;
}

namespace {

struct TreeDraft {
  std::vector<Microservice> nodes;
  std::vector<SftEdge> edges;
};

// Backbone of aggregators feeding the handler, filters distributed over
// the aggregators; the first filter pins the head aggregator so every
// aggregator keeps at least one producer.
TreeDraft parametric_shape(int count, Rng& rng) {
  TreeDraft t;
  const int max_aggs = std::max(1, (count - 1) / 3);
  const int aggs = std::min(count - 2, rng.uniform(1, max_aggs));
  const int filters = count - 1 - aggs;

  std::vector<std::string> filter_ids, agg_ids;
  for (int i = 1; i <= filters; ++i) filter_ids.push_back(padded("m", i, count));
  for (int i = 1; i <= aggs; ++i) agg_ids.push_back(padded("m", filters + i, count));
  const std::string handler_id = padded("m", count, count);

  for (const auto& id : filter_ids) t.nodes.push_back({id, MicroserviceKind::Filter, {}, {}, {}, 0});
  for (const auto& id : agg_ids)
    t.nodes.push_back({id, MicroserviceKind::Aggregator, {}, {}, {}, 0});
  t.nodes.push_back({handler_id, MicroserviceKind::EventHandler, {}, {}, {}, 0});

  for (int i = 0; i + 1 < aggs; ++i) t.edges.push_back({agg_ids[i], agg_ids[i + 1], {}});
  t.edges.push_back({agg_ids[aggs - 1], handler_id, {}});
  t.edges.push_back({filter_ids[0], agg_ids[0], {}});
  for (int i = 1; i < filters; ++i)
    t.edges.push_back({filter_ids[i], agg_ids[rng.uniform(0, aggs - 1)], {}});
  return t;
}

// The three depicted template sizes get their exact shapes; anything else
// extends the family parametrically.
TreeDraft shape_for(int count, Rng& rng) {
  TreeDraft t;
  auto node = [&](const std::string& id, MicroserviceKind kind) {
    t.nodes.push_back({id, kind, {}, {}, {}, 0});
  };
  switch (count) {
    case 3:
      node("m1", MicroserviceKind::Filter);
      node("m2", MicroserviceKind::Aggregator);
      node("m3", MicroserviceKind::EventHandler);
      t.edges = {{"m1", "m2", {}}, {"m2", "m3", {}}};
      return t;
    case 4:
      node("m1", MicroserviceKind::Filter);
      node("m2", MicroserviceKind::Filter);
      node("m3", MicroserviceKind::Aggregator);
      node("m4", MicroserviceKind::EventHandler);
      t.edges = {{"m1", "m3", {}}, {"m2", "m3", {}}, {"m3", "m4", {}}};
      return t;
    case 6:
      node("m1", MicroserviceKind::Filter);
      node("m2", MicroserviceKind::Filter);
      node("m3", MicroserviceKind::Aggregator);
      node("m4", MicroserviceKind::Filter);
      node("m5", MicroserviceKind::Aggregator);
      node("m6", MicroserviceKind::EventHandler);
      t.edges = {{"m1", "m3", {}}, {"m2", "m3", {}}, {"m3", "m5", {}},
                 {"m4", "m5", {}}, {"m5", "m6", {}}};
      return t;
    default:
      return parametric_shape(count, rng);
  }
}

} // namespace

ServiceFunctionTree generate_sft(const GenParams& params, const GeneratedNetwork& net) {
  check_params(params);
  if (params.microservice_count < 3)
    throw GenError("tree templates need at least 3 microservices (filter, aggregator, handler)");
  if (net.sensors.empty()) throw GenError("cannot draw leaf demands from an empty sensor pool");

  Rng rng(params.seed ^ 0xc2b2ae3d27d4eb4full);
  TreeDraft draft = shape_for(params.microservice_count, rng);

  // Bucket the pool by modality and region so leaf demands can point at a
  // concrete group of interchangeable sensors.
  std::map<Modality, std::map<std::string, std::set<SensorId>>> pool;
  for (const auto& s : net.sensors) pool[s.modality][s.roi].insert(s.id);
  std::vector<Modality> modalities;
  std::vector<int> weights;
  for (const auto& [modality, by_region] : pool) {
    int total = 0;
    for (const auto& [roi, ids] : by_region) total += static_cast<int>(ids.size());
    modalities.push_back(modality);
    weights.push_back(total);
  }
  auto draw_modality = [&]() -> const Modality& {
    int total = 0;
    for (int w : weights) total += w;
    int ticket = rng.uniform(1, total);
    for (std::size_t i = 0; i < weights.size(); ++i) {
      ticket -= weights[i];
      if (ticket <= 0) return modalities[i];
    }
    return modalities.back();
  };

  for (auto& node : draft.nodes) {
    node.required_capacity =
        rng.chance(params.big_device_prob) ? CapacityUnits::big() : CapacityUnits::small();
    bool leaf = true;
    for (const auto& e : draft.edges)
      if (e.to == node.id) leaf = false;
    if (!leaf) continue;

    const Modality& modality = draw_modality();
    const auto& by_region = pool.at(modality);
    std::vector<const std::set<SensorId>*> groups;
    for (const auto& [roi, ids] : by_region) groups.push_back(&ids);
    const auto& eligible = *groups[rng.uniform(0, static_cast<int>(groups.size()) - 1)];

    node.required_modality = modality;
    node.eligible_sensors = eligible;
    node.required_sensor_count = rng.uniform(1, std::min<int>(2, eligible.size()));
  }

  for (auto& e : draft.edges)
    e.required_speed = rng.chance(params.fast_edge_prob) ? SpeedUnits::fast() : SpeedUnits::slow();

  return ServiceFunctionTree(std::move(draft.nodes), std::move(draft.edges));
}

Scenario generate_scenario(const GenParams& params) {
  GeneratedNetwork net = generate_physical_network(params);
  Scenario scenario;
  scenario.name = "gen-seed-" + std::to_string(params.seed);
  scenario.sft = generate_sft(params, net);
  scenario.sensors = std::move(net.sensors);
  std::sort(scenario.sensors.begin(), scenario.sensors.end(),
            [](const Sensor& x, const Sensor& y) { return x.id < y.id; });
  scenario.network = std::move(net.network);
  scenario.config.h_max = params.h_max;
  scenario.config.random_seed = params.seed;
  apply_modality_defaults(scenario.config, scenario.sensors);
  return scenario;
}

} // namespace sftm
