#include "sftm/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "sftm/dot.hpp"
#include "sftm/errors.hpp"
#include "sftm/generator.hpp"
#include "sftm/io.hpp"
#include "sftm/oracle.hpp"
#include "sftm/solver.hpp"

namespace sftm {

namespace {

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << text;
}

void print_violations(const std::vector<Violation>& violations, std::ostream& out) {
  for (const auto& v : violations)
    out << "violation " << to_string(v.constraint) << " " << v.subject << ": " << v.detail
        << "\n";
}

int do_solve(const std::string& scenario_path, bool has_hmax, int hmax,
             const std::string& dot_path, const std::string& report_path,
             const std::string& mapping_path, std::ostream& out, std::ostream& err) {
  Scenario scenario = load_scenario(scenario_path);
  if (has_hmax) scenario.config.h_max = hmax;

  MappingResult result = map_tree_to_network(scenario.sft, scenario.network, scenario.config);

  std::vector<Violation> violations;
  if (result.success) {
    // A mapping the solver believes in must survive the independent audit;
    // anything else is a bug, not a solvable-instance outcome.
    violations =
        validate_full_mapping(scenario.network, scenario.sft, result.mapping, scenario.config);
    if (!violations.empty()) {
      err << "internal error: solver result failed validation\n";
      print_violations(violations, err);
      return 1;
    }
  }

  Report report = build_report(scenario, result.success, result.stats, result.mapping, violations);
  if (!report_path.empty()) save_report(report, report_path);
  if (!mapping_path.empty() && result.success) save_mapping(result.mapping, mapping_path);
  if (!dot_path.empty()) write_text(export_dot(scenario.network, result), dot_path);

  const auto& st = result.stats;
  if (!result.success) {
    out << "no feasible mapping for '" << scenario.name << "' (attempts=" << st.attempts
        << ", backtracks=" << st.backtracks << ", extended_searches=" << st.extended_searches
        << ")\n";
    return 2;
  }

  out << "mapped " << result.mapping.placements.size() << " microservices\n";
  for (const auto& [m, d] : result.mapping.placements) out << "  " << m << " -> " << d << "\n";
  for (const auto& fw : result.mapping.forwarding)
    out << "  " << fw.microservice << " pulls its sensor stream from " << fw.selected_sensor_device
        << " over " << fw.path.size() - 1 << " hop(s)\n";
  out << "attempts=" << st.attempts << " backtracks=" << st.backtracks
      << " extended_searches=" << st.extended_searches << " elapsed_ms=" << std::fixed
      << std::setprecision(3) << st.elapsed.count() / 1000.0 << "\n";
  return 0;
}

int do_validate(const std::string& scenario_path, const std::string& mapping_path,
                const std::string& report_path, std::ostream& out, std::ostream& err) {
  Scenario scenario = load_scenario(scenario_path);
  Mapping mapping = load_mapping(mapping_path);

  std::vector<std::string> problems;
  for (const auto& n : scenario.sft.nodes())
    if (!mapping.placements.count(n.id))
      problems.push_back("microservice '" + n.id + "' is not placed");
  for (const auto& [m, d] : mapping.placements) {
    if (!scenario.sft.has_node(m)) problems.push_back("unknown microservice '" + m + "'");
    if (!scenario.network.has_device(d)) problems.push_back("unknown device '" + d + "'");
  }
  if (!problems.empty()) {
    err << "mapping does not fit the scenario:\n";
    for (const auto& p : problems) err << "  - " << p << "\n";
    return 1;
  }

  std::vector<Violation> violations =
      validate_full_mapping(scenario.network, scenario.sft, mapping, scenario.config);
  Report report =
      build_report(scenario, violations.empty(), SolveStats{}, mapping, violations);
  if (!report_path.empty()) save_report(report, report_path);

  if (violations.empty()) {
    out << "mapping satisfies all constraints\n";
    return 0;
  }
  print_violations(violations, out);
  return 2;
}

int do_oracle(const std::string& scenario_path, std::optional<std::uint64_t> limit,
              std::optional<std::uint64_t> cap, const std::string& dump_path,
              std::ostream& out) {
  Scenario scenario = load_scenario(scenario_path);
  OracleOptions options;
  options.limit = limit;
  if (cap) options.explosion_cap = *cap;

  std::vector<Mapping> witnesses =
      enumerate_valid_mappings(scenario.network, scenario.sft, scenario.config, options);
  out << "witnesses: " << witnesses.size() << "\n";
  if (!dump_path.empty()) write_text(mappings_to_json_text(witnesses), dump_path);
  return witnesses.empty() ? 2 : 0;
}

int do_gen(GenParams params, const std::string& profile, bool drew_profile,
           const std::string& out_path, std::ostream& out, std::ostream& err) {
  if (drew_profile && profile == "paper" && !within_paper_scale(params)) {
    err << "parameters fall outside the paper-scale ranges "
           "(devices 5..25, temperature 8..35, visual 2..11, wind 1..5, microservices 3..11)\n";
    return 1;
  }
  Scenario scenario = generate_scenario(params);
  const std::string text = scenario_to_json_text(scenario);
  if (out_path.empty()) {
    out << text;
  } else {
    write_text(text, out_path);
    out << "wrote " << out_path << "\n";
  }
  return 0;
}

int do_gen_examples(const std::string& dir, std::ostream& out) {
  std::filesystem::create_directories(dir);
  const std::vector<Scenario> examples = builtin_examples();
  const std::vector<std::string> stems = {"single_handler", "six_service_pipeline",
                                          "overloaded_handoff"};
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto path = std::filesystem::path(dir) / (stems[i] + ".json");
    save_scenario(examples[i], path);
    out << "wrote " << path.string() << "\n";
    if (examples[i].reference_mapping) {
      const auto mpath = std::filesystem::path(dir) / (stems[i] + ".mapping.json");
      save_mapping(*examples[i].reference_mapping, mpath);
      out << "wrote " << mpath.string() << "\n";
    }
  }
  return 0;
}

int do_bench(const std::string& seeds, const std::string& out_path, std::ostream& out,
             std::ostream& err) {
  const auto sep = seeds.find("..");
  std::uint64_t lo = 0, hi = 0;
  try {
    if (sep == std::string::npos) {
      lo = hi = std::stoull(seeds);
    } else {
      lo = std::stoull(seeds.substr(0, sep));
      hi = std::stoull(seeds.substr(sep + 2));
    }
  } catch (const std::exception&) {
    err << "cannot parse seed range '" << seeds << "' (expected A..B)\n";
    return 1;
  }
  if (hi < lo) {
    err << "empty seed range '" << seeds << "'\n";
    return 1;
  }

  std::ostringstream csv;
  csv << "seed,devices,microservices,success,attempts,backtracks,extended_searches,elapsed_ms\n";
  for (std::uint64_t seed = lo; seed <= hi; ++seed) {
    const GenParams params = paper_scale_params(seed);
    const Scenario scenario = generate_scenario(params);
    const MappingResult result =
        map_tree_to_network(scenario.sft, scenario.network, scenario.config);
    csv << seed << "," << params.device_count << "," << params.microservice_count << ","
        << (result.success ? 1 : 0) << "," << result.stats.attempts << ","
        << result.stats.backtracks << "," << result.stats.extended_searches << "," << std::fixed
        << std::setprecision(3) << result.stats.elapsed.count() / 1000.0 << "\n";
  }

  if (out_path.empty()) {
    out << csv.str();
  } else {
    write_text(csv.str(), out_path);
    out << "wrote " << out_path << "\n";
  }
  return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Map service function trees onto fog networks"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Search for a constraint-satisfying mapping");
  std::string solve_scenario;
  int solve_hmax = 0;
  std::string solve_dot, solve_report, solve_mapping;
  solve->add_option("scenario", solve_scenario, "Scenario JSON file")->required();
  auto* solve_hmax_opt =
      solve->add_option("--hmax", solve_hmax, "Override the scenario's hop bound")
          ->check(CLI::PositiveNumber);
  solve->add_option("--dot", solve_dot, "Write a Graphviz view of the outcome");
  solve->add_option("--report", solve_report, "Write the run report as JSON");
  solve->add_option("--mapping", solve_mapping, "Write the mapping document as JSON");

  auto* validate = app.add_subcommand("validate", "Audit a mapping against a scenario");
  std::string val_scenario, val_mapping, val_report;
  validate->add_option("scenario", val_scenario, "Scenario JSON file")->required();
  validate->add_option("mapping", val_mapping, "Mapping JSON file")->required();
  validate->add_option("--report", val_report, "Write the audit report as JSON");

  auto* oracle = app.add_subcommand("oracle", "Exhaustively enumerate valid mappings");
  std::string ora_scenario, ora_dump;
  std::uint64_t ora_limit = 0, ora_cap = 0;
  oracle->add_option("scenario", ora_scenario, "Scenario JSON file")->required();
  auto* ora_limit_opt =
      oracle->add_option("--limit", ora_limit, "Stop after this many witnesses");
  auto* ora_cap_opt =
      oracle->add_option("--cap", ora_cap, "Override the placement-space explosion cap");
  oracle->add_option("--dump", ora_dump, "Write all witnesses as JSON");

  auto* gen = app.add_subcommand("gen", "Generate a random scenario");
  GenParams params;
  std::string gen_profile, gen_out, gen_examples;
  std::uint64_t gen_seed = 0;
  gen->add_option("--seed", gen_seed, "Generation seed");
  auto* d_opt = gen->add_option("--devices", params.device_count, "Fog device count");
  auto* m_opt =
      gen->add_option("--microservices", params.microservice_count, "Tree node count");
  auto* t_opt =
      gen->add_option("--temperature", params.temperature_sensors, "Temperature sensor count");
  auto* v_opt = gen->add_option("--visual", params.visual_sensors, "Visual sensor count");
  auto* w_opt = gen->add_option("--wind", params.wind_sensors, "Wind sensor count");
  auto* h_opt = gen->add_option("--h-max", params.h_max, "Hop bound for the scenario");
  gen->add_option("--big-prob", params.big_device_prob, "Probability of a Big device");
  gen->add_option("--fast-link-prob", params.fast_link_prob, "Probability of a Fast link");
  gen->add_option("--fast-edge-prob", params.fast_edge_prob,
                  "Probability a tree edge demands Fast");
  gen->add_option("--extra-link-prob", params.extra_link_prob,
                  "Extra link probability beyond the spanning tree");
  gen->add_option("--profile", gen_profile, "Parameter profile (\"paper\" draws counts)")
      ->check(CLI::IsMember({"paper"}));
  gen->add_option("--out", gen_out, "Write the scenario here instead of stdout");
  gen->add_option("--examples", gen_examples,
                  "Write the built-in worked examples into this directory and exit");

  auto* bench = app.add_subcommand("bench", "Generate-and-solve over a seed range");
  std::string bench_seeds = "0..9", bench_out, bench_profile = "paper";
  bench->add_option("--seeds", bench_seeds, "Seed range A..B (inclusive)");
  bench->add_option("--profile", bench_profile, "Parameter profile")
      ->check(CLI::IsMember({"paper"}));
  bench->add_option("--out", bench_out, "Write the CSV here instead of stdout");

  std::vector<const char*> cargs;
  cargs.push_back("sftmap");
  for (const auto& a : argv) cargs.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed())
      return do_solve(solve_scenario, solve_hmax_opt->count() > 0, solve_hmax, solve_dot,
                      solve_report, solve_mapping, out, err);
    if (validate->parsed()) return do_validate(val_scenario, val_mapping, val_report, out, err);
    if (oracle->parsed())
      return do_oracle(ora_scenario,
                       ora_limit_opt->count() ? std::optional(ora_limit) : std::nullopt,
                       ora_cap_opt->count() ? std::optional(ora_cap) : std::nullopt, ora_dump,
                       out);
    if (gen->parsed()) {
      if (!gen_examples.empty()) return do_gen_examples(gen_examples, out);
      if (gen_profile == "paper") {
        GenParams drawn = paper_scale_params(gen_seed);
        if (d_opt->count()) drawn.device_count = params.device_count;
        if (m_opt->count()) drawn.microservice_count = params.microservice_count;
        if (t_opt->count()) drawn.temperature_sensors = params.temperature_sensors;
        if (v_opt->count()) drawn.visual_sensors = params.visual_sensors;
        if (w_opt->count()) drawn.wind_sensors = params.wind_sensors;
        if (h_opt->count()) drawn.h_max = params.h_max;
        return do_gen(drawn, gen_profile, true, gen_out, out, err);
      }
      params.seed = gen_seed;
      return do_gen(params, gen_profile, false, gen_out, out, err);
    }
    if (bench->parsed()) return do_bench(bench_seeds, bench_out, out, err);
  } catch (const ScenarioError& e) {
    err << e.what() << "\n";
    for (const auto& issue : e.issues()) err << "  - " << issue << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

} // namespace sftm
