#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "otnav/metrics.hpp"
#include "otnav/oracle.hpp"
#include "otnav/plans.hpp"
#include "otnav/scenario.hpp"
#include "otnav/simulation.hpp"

namespace otnav {

using Json = nlohmann::json;

// Scenario file schema:
//   rows, cols                      required
//   cell_size, origin [x, y]        optional
//   connectivity                    "4" | "8" | "8-strict"
//   obstacles                       [[r, c] | {"r0", "c0", "r1", "c1"}]
//   robots, targets                 [[r, c]]
//   cost    {adjacent_cost, jump_base, jumps: "pow_manhattan" | "disabled",
//            jump_scope: "restricted" | "full", jump_radius, obstacle_cost}
//   mpc     {horizon, control_horizon, dt, q1, q2, p, alpha, v_min, v_max,
//            omega_min, omega_max, x_min, x_max, y_min, y_max,
//            contraction_penalty, penalty_rounds, max_iters, step_size,
//            arrival_tolerance, transition_time, max_time}
//   seed                            optional unsigned integer
// q1, q2 and p accept a diagonal [a, b] or a full [[a, b], [c, d]].
// Unknown keys are rejected with ParseError.
ScenarioDescription parse_scenario_description(const Json& json);
ScenarioSpec parse_scenario(const Json& json);
ScenarioSpec load_scenario(const std::string& path);
Json to_json(const ScenarioSpec& scenario);

// {"events": [{"time": t, "remove": [[r, c]], "add": [[r, c]]}]}
std::vector<ObstacleEvent> parse_events(const Json& json, const GridWorld& grid);
std::vector<ObstacleEvent> load_events(const std::string& path, const GridWorld& grid);

Json to_json(const TransportPlan& plan);
Json to_json(const PathSystem& paths);
Json to_json(const std::vector<Wave>& waves);
Json to_json(const RefinedPaths& refined);
Json to_json(const OracleResult& oracle);
Json to_json(const Summary& summary);
Json error_record(const std::exception& error);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace otnav
