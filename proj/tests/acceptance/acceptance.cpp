// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "../common/random_scenarios.hpp"
#include "../common/scenarios.hpp"
#include "otnav/errors.hpp"
#include "otnav/generator.hpp"
#include "otnav/oracle.hpp"
#include "otnav/plans.hpp"
#include "otnav/simulation.hpp"
#include "otnav/transport.hpp"

using namespace otnav;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string cells_str(const std::vector<CellId>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "-" : "") + std::to_string(cells[i]);
  return s;
}

bool disjoint(const PathSystem& paths) {
  std::set<CellId> seen;
  for (const Chain& c : paths.chains) {
    for (CellId cell : c.cells) {
      if (!seen.insert(cell).second) return false;
    }
  }
  return true;
}

bool unit_steps(const PathSystem& paths, const GridWorld& grid) {
  for (const Chain& c : paths.chains) {
    for (std::size_t i = 1; i < c.cells.size(); ++i) {
      if (!grid.adjacent(c.cells[i - 1], c.cells[i])) return false;
    }
  }
  return true;
}

Outcome fig2_golden() {
  const auto start = Clock::now();
  const ScenarioSpec s = fixtures::fig2();
  const TransportPlan plan = solve_balanced(s.grid, build_marginals(s), s.cost);
  const PathSystem paths = extract_chains(plan, s);
  const OracleResult oracle = brute_force_oracle(s);
  const double elapsed = seconds_since(start);

  const std::vector<CellId> a{0, 4, 5}, b{0, 1, 5};
  const bool chain_ok = paths.chains.size() == 1 && (paths.chains[0].cells == a || paths.chains[0].cells == b);
  std::set<std::vector<CellId>> optima;
  for (const TransportPlan& p : oracle.optimal_plans) optima.insert(extract_chains(p, s).chains.at(0).cells);
  const bool oracle_ok = oracle.optimal_cost == 2 && optima == std::set<std::vector<CellId>>{a, b} &&
                         std::ranges::find(oracle.optimal_plans, plan) != oracle.optimal_plans.end();
  Outcome o;
  o.pass = plan.total_cost == 2 && chain_ok && oracle_ok && elapsed < 0.1;
  o.detail = "cost=" + std::to_string(plan.total_cost) + " chain=" +
             (paths.chains.empty() ? "none" : cells_str(paths.chains[0].cells)) +
             " oracle_optima=" + std::to_string(optima.size()) + " time=" + std::to_string(elapsed) + "s";
  return o;
}

Outcome unbalanced_golden() {
  const ScenarioSpec s = fixtures::fig2({{0, 1}});
  const TransportPlan plan = solve_unbalanced(s.grid, build_marginals(s), s.cost);
  const PathSystem paths = extract_chains(plan, s);
  const bool chain_ok = paths.chains.size() == 1 && paths.chains[0].cells == std::vector<CellId>{1, 5};
  const OracleResult oracle = brute_force_oracle(s);
  Outcome o;
  o.pass = plan.total_cost == 1 && chain_ok && plan.moved_mass == 4 && oracle.optimal_cost == 1;
  o.detail = "cost=" + std::to_string(plan.total_cost) + " chain=" +
             (paths.chains.empty() ? "none" : cells_str(paths.chains[0].cells)) +
             " m=" + std::to_string(plan.moved_mass);
  return o;
}

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  Rng rng(20240601);
  int compared = 0, mismatches = 0, balanced = 0, infeasible = 0;
  for (int i = 0; i < 240; ++i) {
    const ScenarioSpec s = fixtures::random_small_scenario(rng);
    const bool is_balanced = s.robot_count() == s.target_count();
    balanced += is_balanced ? 1 : 0;
    const OracleResult oracle = brute_force_oracle(s);
    for (Backend backend : {Backend::kFlow, Backend::kDense}) {
      std::optional<Cost> got;
      std::optional<TransportPlan> plan;
      try {
        plan = solve(s, false, backend);
        got = plan->total_cost;
      } catch (const InfeasibleError&) {
      }
      bool ok = got == oracle.optimal_cost;
      if (ok && plan && backend == Backend::kFlow) {
        ok = std::ranges::find(oracle.optimal_plans, *plan) != oracle.optimal_plans.end();
      }
      if (!ok) ++mismatches;
    }
    if (!oracle.optimal_cost) ++infeasible;
    ++compared;
  }
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = compared >= 200 && mismatches == 0 && elapsed < 30.0;
  o.detail = std::to_string(compared) + " scenarios (" + std::to_string(balanced) + " balanced, " +
             std::to_string(infeasible) + " infeasible), mismatches=" + std::to_string(mismatches) +
             " time=" + std::to_string(elapsed) + "s";
  return o;
}

Outcome lemma1_suite() {
  int checked = 0, violations = 0;
  for (std::uint64_t seed = 0; checked < 150 && seed < 1000; ++seed) {
    Rng rng(seed * 7919 + 1);
    GeneratorParams p;
    p.rows = static_cast<int>(rng.uniform_int(3, 10));
    p.cols = static_cast<int>(rng.uniform_int(3, 10));
    p.robots = static_cast<int>(rng.uniform_int(1, 6));
    p.targets = static_cast<int>(rng.uniform_int(1, 6));
    p.obstacle_rects = static_cast<int>(rng.uniform_int(0, 4));
    p.max_rect_side = 3;
    p.connectivity = static_cast<Connectivity>(rng.uniform_int(0, 2));
    p.seed = seed;
    ScenarioSpec s;
    TransportPlan plan;
    try {
      s = generate_scenario(p);
      plan = solve(s);
    } catch (const ConfigError&) {
      continue;
    } catch (const InfeasibleError&) {
      continue;
    }
    ++checked;
    const Lemma1Report report = validate_lemma1(plan, s);
    const PathSystem paths = extract_chains(plan, s);
    std::set<int> targets;
    for (const Chain& c : paths.chains) targets.insert(c.target);
    bool ok = report.ok() && disjoint(paths) &&
              static_cast<int>(paths.chains.size()) == s.assignment_count() &&
              static_cast<int>(targets.size()) == s.assignment_count();
    for (const Move& m : plan.moves) ok = ok && m.mass == 1.0;
    if (s.robot_count() == s.target_count()) {
      std::set<int> robots;
      for (const Chain& c : paths.chains) robots.insert(c.robot);
      ok = ok && static_cast<int>(robots.size()) == s.robot_count();
    }
    if (!ok) ++violations;
  }
  Outcome o;
  o.pass = checked >= 100 && violations == 0;
  o.detail = std::to_string(checked) + " feasible scenarios, violations=" + std::to_string(violations);
  return o;
}

Outcome refinement() {
  const ScenarioSpec s = fixtures::corridor();
  const TransportPlan direct = solve(s);
  const FeasibilityReport coarse = check_practical_feasibility(direct, s.cost);
  const RefinedPaths fine = refine_replan(s, 2);
  const TransportPlan fine_plan = solve(fine.fine_scenario);
  const bool fine_ok = fine.fine.practically_feasible &&
                       check_practical_feasibility(fine_plan, fine.fine_scenario.cost).feasible &&
                       disjoint(fine.fine) && unit_steps(fine.fine, fine.fine_scenario.grid) &&
                       static_cast<int>(fine.fine.chains.size()) == s.assignment_count();
  Outcome o;
  o.pass = !coarse.feasible && fine_ok;
  o.detail = "coarse jumps=" + std::to_string(coarse.jumps.size()) +
             (coarse.jumps.empty() ? "" : " (cost " + std::to_string(coarse.jumps[0].cost) + ")") +
             ", s=2 feasible=" + (fine.fine.practically_feasible ? "yes" : "no") +
             " chains=" + std::to_string(fine.fine.chains.size()) + " world_cost=" + std::to_string(fine.world_cost);
  return o;
}

Outcome simple_replans() {
  const ScenarioSpec s = fixtures::two_corridors();
  const std::vector<Wave> waves = simple_replan(s);
  std::set<int> routed;
  bool waves_ok = true;
  std::string costs;
  for (const Wave& w : waves) {
    waves_ok = waves_ok && !w.paths.chains.empty() && disjoint(w.paths) && unit_steps(w.paths, s.grid);
    for (const Chain& c : w.paths.chains) routed.insert(c.robot);
    costs += (costs.empty() ? "" : ",") + std::to_string(w.paths.total_cost);
  }
  Outcome o;
  o.pass = waves.size() >= 2 && waves_ok && static_cast<int>(routed.size()) == s.robot_count();
  o.detail = std::to_string(waves.size()) + " waves (costs " + costs + "), routed " + std::to_string(routed.size()) +
             "/" + std::to_string(s.robot_count());
  return o;
}

Outcome mpc_tracking() {
  const ScenarioSpec s = fixtures::straight_line(10);
  const SimulationLog log = run_mpc_ot(s);
  const Vec2 goal = s.grid.cell_center(s.targets[0]);
  const double distance = (log.final_states.at(0).position() - goal).norm() / s.grid.cell_size();
  int satisfied = 0;
  for (const ContractionRecord& c : log.contractions) satisfied += c.satisfied ? 1 : 0;
  const double fraction = log.contractions.empty() ? 0.0 : static_cast<double>(satisfied) / log.contractions.size();
  bool monotone = true;
  for (std::size_t k = 2; k < log.contractions.size(); ++k) {
    monotone = monotone && log.contractions[k].p_norm_start <= log.contractions[k - 1].p_norm_start + 1e-9;
  }
  Outcome o;
  o.pass = distance <= 0.1 && fraction >= 0.95 && monotone;
  o.detail = "final distance=" + std::to_string(distance) + " cells, contraction " + std::to_string(satisfied) + "/" +
             std::to_string(log.contractions.size()) + ", boundary p_norm non-increasing=" + (monotone ? "yes" : "no");
  return o;
}

GeneratorParams section_six_params(std::uint64_t seed) {
  GeneratorParams p;
  p.rows = 50;
  p.cols = 75;
  p.robots = 20;
  p.targets = 20;
  p.obstacle_rects = 25;
  p.max_rect_side = 8;
  p.max_obstacle_fraction = 0.2;
  p.connectivity = Connectivity::kEightStrict;
  p.seed = seed;
  return p;
}

bool all_reached(const ScenarioSpec& s, const SimulationLog& log, double tolerance) {
  std::set<int> targets;
  for (std::size_t n = 0; n < log.final_states.size(); ++n) {
    const int m = log.assigned_target[n];
    if (m < 0 || !log.arrived[n] || !targets.insert(m).second) return false;
    const double d = (log.final_states[n].position() - s.grid.cell_center(s.targets[m])).norm();
    if (d > tolerance * s.grid.cell_size()) return false;
  }
  return static_cast<int>(targets.size()) == s.assignment_count();
}

Outcome full_scale() {
  const auto start = Clock::now();
  const ScenarioSpec s = generate_scenario(section_six_params(7));
  const TransportPlan plan = solve(s);
  const PathSystem paths = extract_chains(plan, s);
  const SimulationLog log = run_mpc_ot(s);
  const double elapsed = seconds_since(start);
  Outcome o;
  o.pass = paths.practically_feasible && all_reached(s, log, 0.25) && elapsed < 120.0;
  o.detail = "K=" + std::to_string(s.grid.cell_count()) + " obstacles=" + std::to_string(s.grid.obstacles().size()) +
             " robots=20 arrived=" + (log.all_arrived() ? "all" : "not all") +
             " sim_time=" + std::to_string(log.final_time) + "s wall=" + std::to_string(elapsed) + "s";
  return o;
}

Outcome dynamic_replan() {
  GeneratorParams p = section_six_params(11);
  p.rows = 20;
  p.cols = 30;
  p.robots = p.targets = 6;
  p.obstacle_rects = 8;
  p.max_rect_side = 5;
  const ScenarioSpec s = generate_scenario(p);
  const SimulationLog baseline = run_mpc_ot(s);

  // Put the moved obstacle three cells ahead of the robot with the longest
  // chain, at an epoch boundary about a third into its route.
  const Chain* longest = &baseline.chains.at(0);
  for (const Chain& c : baseline.chains) {
    if (baseline.reference_start[&c - baseline.chains.data()] == 0.0 && c.steps() > longest->steps()) longest = &c;
  }
  const int event_cell_index = std::max(1, longest->steps() / 3);
  const double event_time = std::floor(event_cell_index * s.mpc.transition_time / s.mpc.control_horizon) *
                            s.mpc.control_horizon;
  const CellId added = longest->cells.at(std::min<std::size_t>(event_cell_index + 3, longest->cells.size() - 2));
  ObstacleEvent event{event_time, {s.grid.obstacles().front()}, {added}};

  const SimulationLog log = run_mpc_ot(s, {event});
  const int obstacle_replans = static_cast<int>(
      std::ranges::count_if(log.replans, [](const ReplanEvent& e) { return e.reason == "obstacle"; }));
  bool avoided = true;
  for (const LogRow& row : log.rows) {
    if (row.time + 1e-9 < event_time) continue;
    if (s.grid.locate(row.state.position()) == added) avoided = false;
  }
  for (std::size_t i = 0; i < log.references.size(); ++i) {
    if (log.reference_start[i] + 1e-9 < event_time) continue;
    const ReferenceTrajectory& ref = log.references[i];
    for (double t = 0.0; t <= ref.duration(); t += 0.01) {
      if (s.grid.locate(ref.sample(t).position) == added) avoided = false;
    }
  }
  Outcome o;
  o.pass = obstacle_replans >= 1 && avoided && all_reached(s, log, 0.25);
  o.detail = "event at t=" + std::to_string(event_time) + "s on cell " + std::to_string(added) +
             ", obstacle replans=" + std::to_string(obstacle_replans) + ", avoided=" + (avoided ? "yes" : "no") +
             ", all reached=" + (all_reached(s, log, 0.25) ? "yes" : "no");
  return o;
}

Outcome complexity() {
  const std::vector<std::pair<int, int>> sizes{{10, 15}, {20, 30}, {40, 60}, {50, 75}};
  std::vector<double> log_k, log_t;
  std::string detail;
  for (const auto& [rows, cols] : sizes) {
    const int k = rows * cols;
    std::vector<double> times;
    for (std::uint64_t seed = 0; seed < 7; ++seed) {
      GeneratorParams p;
      p.rows = rows;
      p.cols = cols;
      p.robots = p.targets = k / 150;
      p.obstacle_rects = k / 100;
      p.seed = seed;
      const ScenarioSpec s = generate_scenario(p);
      double best = 1e9;
      for (int rep = 0; rep < 3; ++rep) {
        const auto start = Clock::now();
        const TransportPlan plan = solve(s);
        best = std::min(best, seconds_since(start));
        if (plan.total_cost < 0) return {false, "negative cost"};
      }
      times.push_back(best);
    }
    std::ranges::sort(times);
    const double median = times[times.size() / 2];
    log_k.push_back(std::log(static_cast<double>(k)));
    log_t.push_back(std::log(median));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%sK=%d:%.2gs", detail.empty() ? "" : " ", k, median);
    detail += buf;
  }
  const double n = static_cast<double>(log_k.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < log_k.size(); ++i) {
    mx += log_k[i] / n;
    my += log_t[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < log_k.size(); ++i) {
    sxy += (log_k[i] - mx) * (log_t[i] - my);
    sxx += (log_k[i] - mx) * (log_k[i] - mx);
  }
  const double slope = sxy / sxx;
  char buf[48];
  std::snprintf(buf, sizeof buf, ", log-log slope=%.2f", slope);
  return {slope < 3.0, detail + buf};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"fig2 golden plan", fig2_golden},
      {"unbalanced golden plan", unbalanced_golden},
      {"oracle equivalence", oracle_equivalence},
      {"integral disjoint covering plans", lemma1_suite},
      {"refinement restores practical feasibility", refinement},
      {"simple replan waves", simple_replans},
      {"mpc tracking on a straight chain", mpc_tracking},
      {"75x50 grid with 20 robots end to end", full_scale},
      {"dynamic obstacle replan", dynamic_replan},
      {"flow solver growth is subcubic", complexity},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %2zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
