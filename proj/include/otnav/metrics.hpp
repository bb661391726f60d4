#pragma once

#include <vector>

#include "otnav/plans.hpp"
#include "otnav/simulation.hpp"

namespace otnav {

struct Summary {
  double path_cost = 0.0;
  double makespan = 0.0;  // seconds
  double max_final_p_norm = 0.0;
  double mean_final_p_norm = 0.0;
  int replan_count = 0;
  double solve_seconds = 0.0;
};

// Makespan is the longest chain times transition_time.
Summary summarize(const PathSystem& paths, double transition_time = 1.0, double solve_seconds = 0.0);
// Waves run one after another; each lasts as long as its longest chain.
Summary summarize(const std::vector<Wave>& waves, double transition_time = 1.0, double solve_seconds = 0.0);
// Final p_norm is taken over robots that were assigned a target.
Summary summarize(const SimulationLog& log);

}  // namespace otnav
