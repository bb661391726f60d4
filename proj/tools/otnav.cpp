// Command line front end. Every subcommand prints JSON on stdout; failures
// print {"error": {"kind", "message"}} on stderr and exit with status 1.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otnav/errors.hpp"
#include "otnav/generator.hpp"
#include "otnav/io.hpp"
#include "otnav/metrics.hpp"
#include "otnav/oracle.hpp"
#include "otnav/plans.hpp"
#include "otnav/render.hpp"
#include "otnav/simulation.hpp"
#include "otnav/transport.hpp"

using namespace otnav;

namespace {

// on | off | full | radius=R
void apply_jumps(const std::string& mode, CostParams& cost) {
  if (mode.empty()) return;
  if (mode == "on") {
    cost.jump_rule = JumpRule::kPowManhattan;
  } else if (mode == "off") {
    cost.jump_rule = JumpRule::kDisabled;
  } else if (mode == "full") {
    cost.jump_rule = JumpRule::kPowManhattan;
    cost.jump_scope = JumpScope::kFull;
  } else if (mode.rfind("radius=", 0) == 0) {
    cost.jump_rule = JumpRule::kPowManhattan;
    cost.jump_scope = JumpScope::kRestricted;
    try {
      cost.jump_radius = std::stoi(mode.substr(7));
    } catch (const std::exception&) {
      throw ConfigError("--jumps radius=R needs an integer R");
    }
  } else {
    throw ConfigError("--jumps must be on, off, full or radius=R");
  }
}

Backend parse_backend(const std::string& s) {
  if (s == "flow") return Backend::kFlow;
  if (s == "dense") return Backend::kDense;
  throw ConfigError("--backend must be flow or dense");
}

ScenarioSpec load(const std::string& path, const std::string& jumps) {
  ScenarioSpec s = load_scenario(path);
  apply_jumps(jumps, s.cost);
  s.cost.validate();
  return s;
}

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

double median(std::vector<double> v) {
  std::ranges::sort(v);
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal-transport multi-robot planning and contractive MPC tracking"};
  app.require_subcommand(1);

  std::string scenario_path, jumps, backend = "flow", mode = "simple", events_path, out;
  bool unbalanced = false, simulate_first = false;
  int factor = 0;

  auto* plan = app.add_subcommand("plan", "Solve the transport problem and print the plan");
  plan->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  plan->add_flag("--unbalanced", unbalanced, "Solve the unbalanced problem even when N == M");
  plan->add_option("--jumps", jumps, "on | off | full | radius=R");
  plan->add_option("--backend", backend, "flow | dense");

  auto* paths = app.add_subcommand("paths", "Print the robot chains of the optimal plan");
  paths->add_option("scenario", scenario_path)->required();
  paths->add_option("--jumps", jumps, "on | off | full | radius=R");

  auto* replan = app.add_subcommand("replan", "Simple replan waves or grid refinement");
  replan->add_option("scenario", scenario_path)->required();
  replan->add_option("--mode", mode, "simple | refine")->check(CLI::IsMember({"simple", "refine"}));
  replan->add_option("--s", factor, "Subdivision factor; omitted means try 2..4")->check(CLI::Range(1, 16));
  replan->add_option("--jumps", jumps, "on | off | full | radius=R");

  auto* simulate = app.add_subcommand("simulate", "Run the closed MPC-OT loop");
  simulate->add_option("scenario", scenario_path)->required();
  simulate->add_option("--events", events_path, "Obstacle events JSON file");
  simulate->add_option("--out", out, "Directory for log.csv, replans.csv and summary.json");

  auto* oracle = app.add_subcommand("oracle", "Brute-force optimum on small grids");
  oracle->add_option("scenario", scenario_path)->required();
  oracle->add_option("--jumps", jumps, "on | off | full | radius=R");

  auto* render = app.add_subcommand("render", "Draw the scenario and its paths, or a simulation, as SVG");
  render->add_option("scenario", scenario_path)->required();
  render->add_option("--out", out, "Output SVG file")->required();
  render->add_flag("--simulate", simulate_first, "Render a closed-loop run instead of the plan");
  render->add_option("--events", events_path, "Obstacle events for --simulate");

  std::vector<int> bench_rows{10, 20, 40, 50}, bench_cols{15, 30, 60, 75};
  int bench_seeds = 5;
  double density = 1.0 / 150.0;
  auto* bench = app.add_subcommand("bench", "Flow solver timing across grid sizes");
  bench->add_option("--rows", bench_rows, "Grid rows per size");
  bench->add_option("--cols", bench_cols, "Grid columns per size");
  bench->add_option("--seeds", bench_seeds, "Instances per size")->check(CLI::PositiveNumber);
  bench->add_option("--density", density, "Robots per cell");

  GeneratorParams gen;
  std::string connectivity = "8";
  auto* generate = app.add_subcommand("generate", "Write a random scenario");
  generate->add_option("--rows", gen.rows);
  generate->add_option("--cols", gen.cols);
  generate->add_option("--robots", gen.robots);
  generate->add_option("--targets", gen.targets);
  generate->add_option("--rects", gen.obstacle_rects, "Number of obstacle rectangles");
  generate->add_option("--max-side", gen.max_rect_side, "Largest rectangle side");
  generate->add_option("--max-fraction", gen.max_obstacle_fraction, "Obstacle area budget");
  generate->add_option("--connectivity", connectivity)->check(CLI::IsMember({"4", "8", "8-strict"}));
  generate->add_option("--seed", gen.seed);
  generate->add_option("--out", out, "Output file (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*plan) {
      const ScenarioSpec s = load(scenario_path, jumps);
      print(to_json(solve(s, unbalanced, parse_backend(backend))));
    } else if (*paths) {
      const ScenarioSpec s = load(scenario_path, jumps);
      print(to_json(extract_chains(solve(s), s)));
    } else if (*replan) {
      const ScenarioSpec s = load(scenario_path, jumps);
      if (mode == "simple") {
        print(to_json(simple_replan(s)));
      } else {
        print(to_json(factor > 0 ? refine_replan(s, factor) : refine_until_feasible(s)));
      }
    } else if (*simulate) {
      const ScenarioSpec s = load_scenario(scenario_path);
      const auto events = events_path.empty() ? std::vector<ObstacleEvent>{} : load_events(events_path, s.grid);
      const SimulationLog log = run_mpc_ot(s, events);
      Json summary = to_json(summarize(log));
      summary["all_arrived"] = log.all_arrived();
      summary["assigned_target"] = log.assigned_target;
      if (!out.empty()) {
        std::filesystem::create_directories(out);
        write_text_file(out + "/log.csv", log_csv(log));
        write_text_file(out + "/replans.csv", replans_csv(log));
        write_text_file(out + "/summary.json", summary.dump(2) + "\n");
      }
      print(summary);
    } else if (*oracle) {
      print(to_json(brute_force_oracle(load(scenario_path, jumps))));
    } else if (*render) {
      const ScenarioSpec s = load_scenario(scenario_path);
      if (simulate_first) {
        const auto events = events_path.empty() ? std::vector<ObstacleEvent>{} : load_events(events_path, s.grid);
        write_text_file(out, render_svg(s, run_mpc_ot(s, events)));
      } else {
        write_text_file(out, render_svg(s, extract_chains(solve(s), s)));
      }
      print({{"written", out}});
    } else if (*bench) {
      if (bench_rows.size() != bench_cols.size()) throw ConfigError("--rows and --cols need the same length");
      Json rows = Json::array();
      for (std::size_t i = 0; i < bench_rows.size(); ++i) {
        std::vector<double> times;
        const int k = bench_rows[i] * bench_cols[i];
        const int n = std::max(1, static_cast<int>(std::lround(density * k)));
        for (int seed = 0; seed < bench_seeds; ++seed) {
          GeneratorParams p;
          p.rows = bench_rows[i];
          p.cols = bench_cols[i];
          p.robots = p.targets = n;
          p.obstacle_rects = k / 100;
          p.seed = static_cast<std::uint64_t>(seed);
          const ScenarioSpec s = generate_scenario(p);
          const auto start = std::chrono::steady_clock::now();
          solve(s);
          times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        }
        rows.push_back({{"K", k}, {"robots", n}, {"median_seconds", median(times)}});
      }
      print({{"bench", rows}});
    } else if (*generate) {
      gen.connectivity = connectivity == "4"   ? Connectivity::kFour
                         : connectivity == "8" ? Connectivity::kEight
                                               : Connectivity::kEightStrict;
      const std::string text = to_json(generate_scenario(gen)).dump(2) + "\n";
      if (out.empty()) {
        std::cout << text;
      } else {
        write_text_file(out, text);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << error_record(e).dump() << '\n';
    return 1;
  }
  return 0;
}
