#pragma once

#include <string>
#include <vector>

#include "otnav/scenario.hpp"
#include "otnav/transport.hpp"

namespace otnav {

// A robot's discrete route: cells[0] is the robot's cell, cells.back() its target.
struct Chain {
  int robot = -1;
  int target = -1;
  std::vector<CellId> cells;
  Cost cost = 0;

  int steps() const { return static_cast<int>(cells.size()) - 1; }
  friend bool operator==(const Chain&, const Chain&) = default;
};

struct PathSystem {
  std::vector<Chain> chains;  // ordered by robot id
  bool practically_feasible = true;
  Cost total_cost = 0;
};

// Follows the successor map of the plan's non-fixed moves from every robot
// cell. MalformedPlanError if a chain revisits a cell, stops short of a
// target, or a move belongs to no chain.
PathSystem extract_chains(const TransportPlan& plan, const ScenarioSpec& scenario);

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Move> jumps;  // moves costing more than one adjacent step
};

FeasibilityReport check_practical_feasibility(const TransportPlan& plan, const CostParams& params);

struct Lemma1Report {
  bool integral = true;
  bool disjoint = true;
  bool coverage = true;
  std::vector<Move> fractional_moves;
  std::vector<CellId> overlap_cells;
  std::string detail;

  bool ok() const { return integral && disjoint && coverage; }
};

// Integrality, cell-disjointness and distinct-target coverage of a plan.
Lemma1Report validate_lemma1(const TransportPlan& plan, const ScenarioSpec& scenario);

// One batch of chains executed together; `epoch` is its position in the schedule.
struct Wave {
  int epoch = 0;
  PathSystem paths;
};

// Repeatedly solves, executes the cheapest practically feasible chains, then
// removes their robots and targets. A parked robot keeps its target cell
// blocked for later waves. StallError if a solve yields no executable chain.
std::vector<Wave> simple_replan(const ScenarioSpec& scenario);

struct RefinedPaths {
  Refinement refinement;
  ScenarioSpec fine_scenario;
  PathSystem fine;
  // Fine chains mapped to coarse cells, consecutive duplicates collapsed.
  std::vector<std::vector<CellId>> coarse_paths;
  // Fine path cost divided by the subdivision factor.
  double world_cost = 0.0;
};

RefinedPaths refine_replan(const ScenarioSpec& scenario, int factor);

// Tries factors 2..max_factor and returns the first practically feasible
// refinement; InfeasibleError if none is.
RefinedPaths refine_until_feasible(const ScenarioSpec& scenario, int max_factor = 4);

}  // namespace otnav
