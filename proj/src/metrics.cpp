#include "otnav/metrics.hpp"

#include <algorithm>

namespace otnav {

namespace {

int longest_chain(const PathSystem& paths) {
  int steps = 0;
  for (const Chain& chain : paths.chains) steps = std::max(steps, chain.steps());
  return steps;
}

}  // namespace

Summary summarize(const PathSystem& paths, double transition_time, double solve_seconds) {
  Summary s;
  s.path_cost = static_cast<double>(paths.total_cost);
  s.makespan = longest_chain(paths) * transition_time;
  s.solve_seconds = solve_seconds;
  return s;
}

Summary summarize(const std::vector<Wave>& waves, double transition_time, double solve_seconds) {
  Summary s;
  for (const Wave& wave : waves) {
    s.path_cost += static_cast<double>(wave.paths.total_cost);
    s.makespan += longest_chain(wave.paths) * transition_time;
  }
  s.replan_count = waves.empty() ? 0 : static_cast<int>(waves.size()) - 1;
  s.solve_seconds = solve_seconds;
  return s;
}

Summary summarize(const SimulationLog& log) {
  Summary s;
  s.path_cost = static_cast<double>(log.initial_plan_cost);
  s.makespan = log.final_time;
  s.replan_count = log.replan_count();
  s.solve_seconds = log.plan_seconds + log.mpc_seconds;

  std::vector<double> last(log.assigned_target.size(), 0.0);
  for (const LogRow& row : log.rows) last[row.robot] = row.p_norm;
  int counted = 0;
  double sum = 0.0;
  for (std::size_t n = 0; n < last.size(); ++n) {
    if (log.assigned_target[n] < 0) continue;
    s.max_final_p_norm = std::max(s.max_final_p_norm, last[n]);
    sum += last[n];
    ++counted;
  }
  s.mean_final_p_norm = counted > 0 ? sum / counted : 0.0;
  return s;
}

}  // namespace otnav
