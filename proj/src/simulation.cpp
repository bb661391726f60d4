#include "otnav/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "otnav/errors.hpp"
#include "otnav/transport.hpp"

namespace otnav {

int SimulationLog::replan_count() const {
  return static_cast<int>(std::ranges::count_if(replans, [](const ReplanEvent& e) { return e.reason != "initial"; }));
}

bool SimulationLog::all_arrived() const {
  for (std::size_t n = 0; n < arrived.size(); ++n) {
    if (assigned_target[n] >= 0 && !arrived[n]) return false;
  }
  return true;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool contains(const std::vector<CellId>& cells, CellId cell) {
  return std::ranges::find(cells, cell) != cells.end();
}

struct RobotTrack {
  RobotState state;
  int target = -1;  // index into scenario.targets
  Chain chain;      // cells in the current world grid
  ReferenceTrajectory reference;
  double reference_start = 0.0;
  std::vector<ControlInput> warm;
  bool arrived = false;
};

class Loop {
 public:
  Loop(const ScenarioSpec& scenario, std::vector<ObstacleEvent> events)
      : scenario_(scenario), events_(std::move(events)), grid_(scenario.grid), cfg_(scenario.mpc) {
    validate_scenario(scenario_);
    cfg_.validate();
    std::ranges::stable_sort(events_, {}, &ObstacleEvent::time);
    const Vec2 lo = grid_.lower_corner();
    const Vec2 hi = grid_.upper_corner();
    PositionBounds& box = cfg_.x_bounds;
    box.x_min = std::max(box.x_min, lo.x());
    box.y_min = std::max(box.y_min, lo.y());
    box.x_max = std::min(box.x_max, hi.x());
    box.y_max = std::min(box.y_max, hi.y());
    robots_.resize(scenario_.robot_count());
    for (int n = 0; n < scenario_.robot_count(); ++n) {
      const Vec2 c = grid_.cell_center(scenario_.robots[n]);
      robots_[n].state = {c.x(), c.y(), 0.0};
    }
    target_taken_.assign(scenario_.target_count(), false);
  }

  SimulationLog run() {
    log_.dt = cfg_.dt;
    const int nc = cfg_.steps_per_control();
    const int max_steps = static_cast<int>(std::ceil(cfg_.max_time / cfg_.dt));
    int step = 0;
    bool force = false;

    replan(0.0, "initial", true);
    for (RobotTrack& robot : robots_) {
      if (robot.chain.cells.size() >= 2) {
        const Vec2 d = grid_.cell_center(robot.chain.cells[1]) - grid_.cell_center(robot.chain.cells[0]);
        robot.state.theta = wrap_angle(std::atan2(d.y(), d.x()));
      }
    }

    while (true) {
      const double t = step * cfg_.dt;
      force = apply_events(t) || force;
      mark_arrivals(t);
      if (finished() || step >= max_steps) break;
      if (step > 0) {
        replan(t, force ? "obstacle" : "improvement", force);
        force = false;
      }
      advance(step, nc);
      step += nc;
    }

    log_.final_time = step * cfg_.dt;
    log_.final_grid = grid_;
    for (const RobotTrack& robot : robots_) {
      log_.assigned_target.push_back(robot.target);
      log_.arrived.push_back(robot.arrived);
      log_.final_states.push_back(robot.state);
    }
    return std::move(log_);
  }

 private:
  bool apply_events(double t) {
    bool changed = false;
    while (next_event_ < events_.size() && events_[next_event_].time <= t + 1e-9) {
      const ObstacleEvent& event = events_[next_event_++];
      std::vector<CellId> obstacles = grid_.obstacles();
      for (CellId cell : event.remove) {
        if (!grid_.in_range(cell)) throw RangeError("event removes out-of-range cell " + std::to_string(cell));
        std::erase(obstacles, cell);
      }
      for (CellId cell : event.add) {
        if (!grid_.in_range(cell)) throw RangeError("event adds out-of-range cell " + std::to_string(cell));
        if (contains(scenario_.targets, cell)) {
          throw OverlapError("event places an obstacle on target cell " + std::to_string(cell));
        }
        for (const RobotTrack& robot : robots_) {
          if (grid_.contains(robot.state.position()) && grid_.locate(robot.state.position()) == cell) {
            throw OverlapError("event places an obstacle on a robot at cell " + std::to_string(cell));
          }
        }
        if (!contains(obstacles, cell)) obstacles.push_back(cell);
      }
      grid_ = grid_.with_obstacles(obstacles);
      changed = true;
    }
    return changed;
  }

  void mark_arrivals(double t) {
    const double tolerance = cfg_.arrival_tolerance * grid_.cell_size();
    for (RobotTrack& robot : robots_) {
      if (robot.arrived || robot.target < 0) continue;
      if (t - robot.reference_start < robot.reference.duration() - 1e-9) continue;
      const Vec2 goal = grid_.cell_center(scenario_.targets[robot.target]);
      if ((robot.state.position() - goal).norm() <= tolerance) {
        robot.arrived = true;
        target_taken_[robot.target] = true;
      }
    }
  }

  bool finished() const {
    int arrived = 0;
    for (const RobotTrack& robot : robots_) arrived += robot.arrived ? 1 : 0;
    return arrived >= scenario_.assignment_count();
  }

  // Cells that no active robot may enter: obstacles and parked robots' targets.
  std::vector<CellId> blocked_cells() const {
    std::vector<CellId> blocked = grid_.obstacles();
    for (const RobotTrack& robot : robots_) {
      if (robot.arrived) blocked.push_back(scenario_.targets[robot.target]);
    }
    return blocked;
  }

  // Cell a robot plans from: the cell under it, or failing that the nearest
  // free cell of its chain or neighborhood.
  CellId resolve_cell(const RobotTrack& robot, const GridWorld& world, const std::vector<CellId>& taken) const {
    const Vec2 pos = robot.state.position();
    auto usable = [&](CellId cell) { return world.in_range(cell) && world.is_free(cell) && !contains(taken, cell); };
    std::vector<CellId> candidates;
    if (world.contains(pos)) {
      const CellId here = world.locate(pos);
      if (usable(here)) return here;
      candidates = world.neighbors(here);
    }
    candidates.insert(candidates.end(), robot.chain.cells.begin(), robot.chain.cells.end());
    CellId best = -1;
    double best_distance = std::numeric_limits<double>::infinity();
    for (CellId cell : candidates) {
      if (!usable(cell)) continue;
      const double d = (world.cell_center(cell) - pos).norm();
      if (d < best_distance) {
        best_distance = d;
        best = cell;
      }
    }
    if (best < 0) throw StallError("robot at (" + std::to_string(pos.x()) + ", " + std::to_string(pos.y()) +
                                   ") has no free cell to plan from");
    return best;
  }

  // Remaining cost of the current plan, or nullopt when it can no longer be executed.
  std::optional<Cost> current_plan_cost(const GridWorld& world, const std::vector<CellId>& cells) const {
    Cost total = 0;
    std::vector<CellId> used;
    for (std::size_t n = 0; n < robots_.size(); ++n) {
      const RobotTrack& robot = robots_[n];
      if (robot.arrived) continue;
      if (robot.target < 0) {
        if (robot.chain.cells.empty()) continue;
        return std::nullopt;
      }
      const auto& chain = robot.chain.cells;
      std::ptrdiff_t at = -1;
      const auto it = std::find(chain.rbegin(), chain.rend(), cells[n]);
      if (it != chain.rend()) {
        at = chain.rend() - it - 1;
      } else {
        // Straddling a cell border next to the chain still counts as on it.
        double best = 1.5 * world.cell_size();
        for (std::size_t i = 0; i < chain.size(); ++i) {
          const double d = (world.cell_center(chain[i]) - robot.state.position()).norm();
          if (d < best) {
            best = d;
            at = static_cast<std::ptrdiff_t>(i);
          }
        }
      }
      if (at < 0) return std::nullopt;
      for (auto c = chain.begin() + at; c != chain.end(); ++c) {
        if (world.is_obstacle(*c) || contains(used, *c)) return std::nullopt;
        used.push_back(*c);
      }
      total += scenario_.cost.adjacent_cost * static_cast<Cost>(chain.end() - (chain.begin() + at) - 1);
    }
    return total;
  }

  void replan(double t, const std::string& reason, bool force) {
    const auto start = Clock::now();
    const GridWorld world = grid_.with_obstacles(blocked_cells());

    std::vector<CellId> cells(robots_.size(), -1);
    std::vector<CellId> taken;
    for (std::size_t n = 0; n < robots_.size(); ++n) {
      if (robots_[n].arrived) continue;
      cells[n] = resolve_cell(robots_[n], world, taken);
      taken.push_back(cells[n]);
    }

    // A robot already standing on an open target claims it directly.
    std::vector<int> direct(robots_.size(), -1);
    std::vector<bool> target_open(scenario_.target_count());
    for (int m = 0; m < scenario_.target_count(); ++m) target_open[m] = !target_taken_[m];
    for (std::size_t n = 0; n < robots_.size(); ++n) {
      if (cells[n] < 0) continue;
      const auto it = std::ranges::find(scenario_.targets, cells[n]);
      if (it == scenario_.targets.end()) continue;
      const int m = static_cast<int>(it - scenario_.targets.begin());
      if (!target_open[m]) continue;
      direct[n] = m;
      target_open[m] = false;
    }

    ScenarioSpec reduced = scenario_;
    std::vector<CellId> blocked = world.obstacles();
    std::vector<int> robot_ids, target_ids;
    reduced.robots.clear();
    reduced.targets.clear();
    for (std::size_t n = 0; n < robots_.size(); ++n) {
      if (cells[n] < 0) continue;
      if (direct[n] >= 0) {
        blocked.push_back(cells[n]);
      } else {
        robot_ids.push_back(static_cast<int>(n));
        reduced.robots.push_back(cells[n]);
      }
    }
    for (int m = 0; m < scenario_.target_count(); ++m) {
      if (!target_open[m]) continue;
      target_ids.push_back(m);
      reduced.targets.push_back(scenario_.targets[m]);
    }
    reduced.grid = world.with_obstacles(blocked);

    std::vector<Chain> chains(robots_.size());
    Cost total = 0;
    for (std::size_t n = 0; n < robots_.size(); ++n) {
      if (direct[n] >= 0) chains[n] = Chain{static_cast<int>(n), direct[n], {cells[n]}, 0};
    }
    if (!reduced.robots.empty() && !reduced.targets.empty()) {
      const TransportPlan plan = solve(reduced);
      const PathSystem paths = extract_chains(plan, reduced);
      if (!paths.practically_feasible) {
        throw InfeasibleError("plan at t = " + std::to_string(t) + " needs a jump; refine the grid");
      }
      for (const Chain& chain : paths.chains) {
        Chain mapped = chain;
        mapped.robot = robot_ids[chain.robot];
        mapped.target = target_ids[chain.target];
        total += mapped.cost;
        chains[mapped.robot] = std::move(mapped);
      }
    }

    bool adopt = force || log_.replans.empty();
    if (!adopt) {
      const std::optional<Cost> remaining = current_plan_cost(world, cells);
      adopt = !remaining || total < *remaining;
    }
    if (adopt) {
      const int r = static_cast<int>(log_.replans.size());
      if (r == 0) log_.initial_plan_cost = total;
      log_.replans.push_back({t, reason, r});
      for (std::size_t n = 0; n < robots_.size(); ++n) {
        RobotTrack& robot = robots_[n];
        if (robot.arrived) continue;
        robot.chain = chains[n];
        robot.target = chains[n].cells.empty() ? -1 : chains[n].target;
        robot.reference = robot.chain.cells.empty()
                              ? ReferenceTrajectory({robot.state.position()}, cfg_.transition_time,
                                                    static_cast<int>(n), r)
                              : (r == 0 ? interpolate(robot.chain, grid_, cfg_.transition_time, r)
                                        : interpolate_from(robot.state.position(), robot.chain, grid_,
                                                           cfg_.transition_time, r));
        robot.reference_start = t;
        robot.warm.clear();
        log_.references.push_back(robot.reference);
        log_.chains.push_back(robot.chain);
        log_.reference_start.push_back(t);
      }
    }
    log_.plan_seconds += seconds_since(start);
  }

  void advance(int step, int nc) {
    const auto start = Clock::now();
    const double t0 = step * cfg_.dt;
    const std::size_t n_robots = robots_.size();
    std::vector<std::vector<ControlInput>> applied(n_robots);
    std::vector<std::vector<RobotState>> states(n_robots);

    for (std::size_t n = 0; n < n_robots; ++n) {
      RobotTrack& robot = robots_[n];
      states[n].push_back(robot.state);
      if (robot.arrived) {
        applied[n].assign(nc, ControlInput{});
        states[n].assign(nc + 1, robot.state);
        continue;
      }
      const double tau = t0 - robot.reference_start;
      const MpcSolution sol = solve_mpc(robot.state, robot.reference, tau, cfg_, robot.warm);
      const double e_start = tracking_error(robot.state, robot.reference, tau, cfg_.p).p_norm;
      for (int k = 0; k < nc; ++k) {
        applied[n].push_back(sol.controls[k]);
        robot.state = step_dynamics(robot.state, sol.controls[k], cfg_.dt);
        states[n].push_back(robot.state);
      }
      const double e_end = tracking_error(robot.state, robot.reference, tau + nc * cfg_.dt, cfg_.p).p_norm;
      log_.contractions.push_back({t0, static_cast<int>(n), e_start, e_end, sol.contraction_satisfied});
      robot.warm.assign(sol.controls.begin() + nc, sol.controls.end());
    }

    for (int k = 0; k < nc; ++k) {
      for (std::size_t n = 0; n < n_robots; ++n) {
        const RobotTrack& robot = robots_[n];
        const double t = (step + k) * cfg_.dt;
        LogRow row;
        row.step = step + k;
        row.time = t;
        row.robot = static_cast<int>(n);
        row.state = states[n][k];
        row.control = applied[n][k];
        row.reference = robot.arrived ? grid_.cell_center(scenario_.targets[robot.target])
                                      : robot.reference.sample(t - robot.reference_start).position;
        row.error = row.state.position() - row.reference;
        row.p_norm = p_norm(row.error, cfg_.p);
        row.replan_index = robot.reference.replan_index();
        log_.rows.push_back(row);
      }
    }
    log_.mpc_seconds += seconds_since(start);
  }

  const ScenarioSpec& scenario_;
  std::vector<ObstacleEvent> events_;
  std::size_t next_event_ = 0;
  GridWorld grid_;
  MpcConfig cfg_;
  std::vector<RobotTrack> robots_;
  std::vector<bool> target_taken_;
  SimulationLog log_;
};

}  // namespace

SimulationLog run_mpc_ot(const ScenarioSpec& scenario, const std::vector<ObstacleEvent>& events) {
  return Loop(scenario, events).run();
}

std::string log_csv(const SimulationLog& log) {
  std::ostringstream out;
  out.precision(10);
  out << "step,time,robot,px,py,theta,v,omega,ref_x,ref_y,ex,ey,p_norm,replan_index\n";
  for (const LogRow& row : log.rows) {
    out << row.step << ',' << row.time << ',' << row.robot << ',' << row.state.px << ',' << row.state.py << ','
        << row.state.theta << ',' << row.control.v << ',' << row.control.omega << ',' << row.reference.x() << ','
        << row.reference.y() << ',' << row.error.x() << ',' << row.error.y() << ',' << row.p_norm << ','
        << row.replan_index << '\n';
  }
  return out.str();
}

std::string replans_csv(const SimulationLog& log) {
  std::ostringstream out;
  out.precision(10);
  out << "time,reason,replan_index\n";
  for (const ReplanEvent& e : log.replans) out << e.time << ',' << e.reason << ',' << e.replan_index << '\n';
  return out.str();
}

}  // namespace otnav
