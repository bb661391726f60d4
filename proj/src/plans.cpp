#include "otnav/plans.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>

#include "otnav/errors.hpp"

namespace otnav {

PathSystem extract_chains(const TransportPlan& plan, const ScenarioSpec& scenario) {
  const GridWorld& grid = scenario.grid;
  std::unordered_map<CellId, std::size_t> successor;  // from cell -> index into plan.moves
  for (std::size_t i = 0; i < plan.moves.size(); ++i) {
    const Move& move = plan.moves[i];
    if (move.mass <= 0.0 || move.from == move.to) continue;
    if (!grid.in_range(move.from) || !grid.in_range(move.to)) throw MalformedPlanError("move cell out of range");
    if (!successor.emplace(move.from, i).second) {
      throw MalformedPlanError("cell " + std::to_string(move.from) + " sends mass to two cells");
    }
  }
  std::unordered_map<CellId, int> target_of;
  for (int m = 0; m < scenario.target_count(); ++m) target_of.emplace(scenario.targets[m], m);

  PathSystem out;
  std::vector<char> used_move(plan.moves.size(), 0);
  std::vector<char> visited(static_cast<std::size_t>(grid.cell_count()), 0);
  for (int n = 0; n < scenario.robot_count(); ++n) {
    const CellId start = scenario.robots[n];
    if (!successor.contains(start)) continue;  // unrouted robot
    Chain chain{n, -1, {start}, 0};
    visited[start] = 1;
    CellId current = start;
    while (!target_of.contains(current)) {
      const auto it = successor.find(current);
      if (it == successor.end()) {
        throw MalformedPlanError("chain of robot " + std::to_string(n) + " stops at cell " +
                                 std::to_string(current) + " before reaching a target");
      }
      const Move& move = plan.moves[it->second];
      used_move[it->second] = 1;
      if (visited[move.to]) {
        throw MalformedPlanError("cell " + std::to_string(move.to) + " is visited twice");
      }
      visited[move.to] = 1;
      chain.cells.push_back(move.to);
      chain.cost += move.cost;
      if (move.cost > scenario.cost.adjacent_cost) out.practically_feasible = false;
      current = move.to;
    }
    chain.target = target_of.at(current);
    out.total_cost += chain.cost;
    out.chains.push_back(std::move(chain));
  }
  for (std::size_t i = 0; i < plan.moves.size(); ++i) {
    const Move& move = plan.moves[i];
    if (move.mass > 0.0 && move.from != move.to && !used_move[i]) {
      throw MalformedPlanError("move " + std::to_string(move.from) + "->" + std::to_string(move.to) +
                               " belongs to no robot chain");
    }
  }
  return out;
}

FeasibilityReport check_practical_feasibility(const TransportPlan& plan, const CostParams& params) {
  FeasibilityReport report;
  for (const Move& move : plan.moves) {
    if (move.mass > 0.0 && move.cost > params.adjacent_cost) report.jumps.push_back(move);
  }
  report.feasible = report.jumps.empty();
  return report;
}

Lemma1Report validate_lemma1(const TransportPlan& plan, const ScenarioSpec& scenario) {
  Lemma1Report report;
  const GridWorld& grid = scenario.grid;
  const Marginals marginals = build_marginals(scenario);

  for (const Move& move : plan.moves) {
    if (move.mass != 0.0 && move.mass != 1.0) {
      report.integral = false;
      report.fractional_moves.push_back(move);
    }
  }

  std::vector<double> in(static_cast<std::size_t>(grid.cell_count()), 0.0);
  std::vector<double> out(in.size(), 0.0);
  for (const Move& move : plan.moves) {
    if (!grid.in_range(move.from) || !grid.in_range(move.to)) {
      report.disjoint = false;
      report.detail += "move out of range; ";
      continue;
    }
    out[move.from] += move.mass;
    in[move.to] += move.mass;
  }
  for (CellId cell : plan.fixed_points) {
    if (!grid.in_range(cell)) continue;
    out[cell] += 1.0;
    in[cell] += 1.0;
  }
  for (CellId cell = 0; cell < grid.cell_count(); ++cell) {
    if (in[cell] > marginals.nu[cell] || out[cell] > marginals.mu[cell]) {
      report.disjoint = false;
      report.overlap_cells.push_back(cell);
    }
  }
  if (!report.overlap_cells.empty()) {
    report.detail += "cells exceeding their marginal: " + std::to_string(report.overlap_cells.size()) + "; ";
  }

  if (report.integral && report.disjoint) {
    try {
      const PathSystem paths = extract_chains(plan, scenario);
      std::vector<int> targets;
      for (const Chain& chain : paths.chains) targets.push_back(chain.target);
      std::sort(targets.begin(), targets.end());
      const bool distinct = std::adjacent_find(targets.begin(), targets.end()) == targets.end();
      if (static_cast<int>(paths.chains.size()) != scenario.assignment_count() || !distinct) {
        report.coverage = false;
        report.detail += "routed " + std::to_string(paths.chains.size()) + " robots, expected " +
                         std::to_string(scenario.assignment_count()) + "; ";
      }
    } catch (const MalformedPlanError& e) {
      report.coverage = false;
      report.detail += e.what();
    }
  } else {
    report.coverage = false;
  }
  return report;
}

namespace {

bool unit_steps(const Chain& chain, const GridWorld& grid) {
  for (std::size_t i = 1; i < chain.cells.size(); ++i) {
    if (!grid.adjacent(chain.cells[i - 1], chain.cells[i])) return false;
  }
  return true;
}

}  // namespace

std::vector<Wave> simple_replan(const ScenarioSpec& scenario) {
  std::vector<int> robots(scenario.robot_count());
  std::vector<int> targets(scenario.target_count());
  for (int i = 0; i < scenario.robot_count(); ++i) robots[i] = i;
  for (int i = 0; i < scenario.target_count(); ++i) targets[i] = i;
  std::vector<CellId> blocked = scenario.grid.obstacles();

  std::vector<Wave> waves;
  while (!robots.empty() && !targets.empty()) {
    ScenarioSpec reduced = scenario;
    reduced.grid = scenario.grid.with_obstacles(blocked);
    reduced.robots.clear();
    reduced.targets.clear();
    for (int id : robots) reduced.robots.push_back(scenario.robots[id]);
    for (int id : targets) reduced.targets.push_back(scenario.targets[id]);

    const PathSystem paths = extract_chains(solve(reduced), reduced);
    std::vector<const Chain*> executable;
    for (const Chain& chain : paths.chains) {
      if (unit_steps(chain, reduced.grid)) executable.push_back(&chain);
    }
    if (executable.empty()) {
      throw StallError("wave " + std::to_string(waves.size()) + " has no chain made of one-cell steps");
    }
    Cost shortest = executable.front()->cost;
    for (const Chain* chain : executable) shortest = std::min(shortest, chain->cost);

    Wave wave{static_cast<int>(waves.size()), {}};
    std::vector<int> done_robots, done_targets;
    for (const Chain* chain : executable) {
      if (chain->cost != shortest) continue;
      Chain mapped = *chain;
      mapped.robot = robots[chain->robot];
      mapped.target = targets[chain->target];
      wave.paths.total_cost += mapped.cost;
      done_robots.push_back(mapped.robot);
      done_targets.push_back(mapped.target);
      blocked.push_back(mapped.cells.back());
      wave.paths.chains.push_back(std::move(mapped));
    }
    std::erase_if(robots, [&](int id) { return std::ranges::find(done_robots, id) != done_robots.end(); });
    std::erase_if(targets, [&](int id) { return std::ranges::find(done_targets, id) != done_targets.end(); });
    waves.push_back(std::move(wave));
  }
  return waves;
}

RefinedPaths refine_replan(const ScenarioSpec& scenario, int factor) {
  RefinedPaths out{refine(scenario.grid, factor), {}, {}, {}, 0.0};
  out.fine_scenario = refine_scenario(scenario, out.refinement);
  out.fine = extract_chains(solve(out.fine_scenario), out.fine_scenario);
  for (const Chain& chain : out.fine.chains) {
    std::vector<CellId> coarse;
    for (CellId cell : chain.cells) {
      const CellId c = out.refinement.fine_to_coarse[cell];
      if (coarse.empty() || coarse.back() != c) coarse.push_back(c);
    }
    out.coarse_paths.push_back(std::move(coarse));
  }
  out.world_cost = static_cast<double>(out.fine.total_cost) / factor;
  return out;
}

RefinedPaths refine_until_feasible(const ScenarioSpec& scenario, int max_factor) {
  for (int factor = 2; factor <= max_factor; ++factor) {
    try {
      RefinedPaths result = refine_replan(scenario, factor);
      if (result.fine.practically_feasible) return result;
    } catch (const InfeasibleError&) {
      // try a finer grid
    }
  }
  throw InfeasibleError("no practically feasible refinement up to factor " + std::to_string(max_factor));
}

}  // namespace otnav
