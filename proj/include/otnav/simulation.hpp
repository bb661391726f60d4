#pragma once

#include <string>
#include <vector>

#include "otnav/mpc.hpp"
#include "otnav/plans.hpp"
#include "otnav/scenario.hpp"
#include "otnav/trajectory.hpp"

namespace otnav {

// Obstacle change applied at the first control-epoch boundary at or after `time`.
struct ObstacleEvent {
  double time = 0.0;
  std::vector<CellId> remove;
  std::vector<CellId> add;
};

// One robot at one integration step. `control` is applied over [time, time + dt].
struct LogRow {
  int step = 0;
  double time = 0.0;
  int robot = 0;
  RobotState state;
  ControlInput control;
  Vec2 reference = Vec2::Zero();
  Vec2 error = Vec2::Zero();
  double p_norm = 0.0;
  int replan_index = 0;
};

struct ReplanEvent {
  double time = 0.0;
  std::string reason;  // "initial", "obstacle" or "improvement"
  int replan_index = 0;
};

// Closed-loop error over one control epoch of one robot.
struct ContractionRecord {
  double time = 0.0;
  int robot = 0;
  double p_norm_start = 0.0;
  double p_norm_end = 0.0;
  bool satisfied = false;
};

struct SimulationLog {
  double dt = 0.0;
  std::vector<LogRow> rows;  // ordered by (step, robot)
  std::vector<ReplanEvent> replans;
  std::vector<ContractionRecord> contractions;
  std::vector<ReferenceTrajectory> references;  // every reference issued, in order
  std::vector<Chain> chains;                    // chain behind each entry of `references`
  std::vector<double> reference_start;          // absolute start time of each reference
  std::vector<int> assigned_target;             // per robot, -1 when unassigned
  std::vector<bool> arrived;
  std::vector<RobotState> final_states;
  GridWorld final_grid;
  Cost initial_plan_cost = 0;
  double final_time = 0.0;
  double plan_seconds = 0.0;
  double mpc_seconds = 0.0;

  int replan_count() const;  // replans after the initial solve
  bool all_arrived() const;
};

// Closed loop: OT plan, chains, references, per-robot contractive MPC over
// each control horizon, then a fresh OT solve from the robots' current
// cells. The current plan is kept while its remaining chains stay valid and
// no cheaper plan exists; obstacle events always force a new plan. Robots
// whose reference has finished and that lie within arrival_tolerance cell
// widths of their target are parked and leave the problem.
//
// Throws InfeasibleError when a plan needs a jump, OverlapError when an event
// places an obstacle on a robot or a target.
SimulationLog run_mpc_ot(const ScenarioSpec& scenario, const std::vector<ObstacleEvent>& events = {});

// "step,time,robot,px,py,theta,v,omega,ref_x,ref_y,ex,ey,p_norm,replan_index"
std::string log_csv(const SimulationLog& log);
// "time,reason,replan_index"
std::string replans_csv(const SimulationLog& log);

}  // namespace otnav
