#include "otnav/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "otnav/errors.hpp"

namespace otnav {

namespace {

void reject_unknown(const Json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ParseError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const Json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

RowCol parse_rowcol(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw ParseError(where + " entries must be [row, col] integer pairs");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

std::vector<RowCol> parse_cells(const Json& obj, const char* key) {
  std::vector<RowCol> out;
  if (!obj.contains(key)) return out;
  if (!obj.at(key).is_array()) throw ParseError(std::string(key) + " must be a list");
  for (const Json& j : obj.at(key)) out.push_back(parse_rowcol(j, key));
  return out;
}

Eigen::Matrix2d parse_matrix(const Json& j, const char* key) {
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  if (j.is_array() && j.size() == 2 && j[0].is_number()) {
    m(0, 0) = j[0].get<double>();
    m(1, 1) = j[1].get<double>();
  } else if (j.is_array() && j.size() == 2 && j[0].is_array() && j[0].size() == 2 && j[1].is_array() &&
             j[1].size() == 2) {
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) m(r, c) = j[r][c].get<double>();
    }
  } else {
    throw ParseError(std::string("mpc.") + key + " must be [a, b] or [[a, b], [c, d]]");
  }
  return m;
}

Connectivity parse_connectivity(const Json& j) {
  const std::string s = j.is_number_integer() ? std::to_string(j.get<int>()) : j.get<std::string>();
  if (s == "4") return Connectivity::kFour;
  if (s == "8") return Connectivity::kEight;
  if (s == "8-strict") return Connectivity::kEightStrict;
  throw ParseError("connectivity must be \"4\", \"8\" or \"8-strict\", got \"" + s + "\"");
}

const char* connectivity_name(Connectivity c) {
  switch (c) {
    case Connectivity::kFour: return "4";
    case Connectivity::kEight: return "8";
    case Connectivity::kEightStrict: return "8-strict";
  }
  return "8";
}

CostParams parse_cost(const Json& j) {
  reject_unknown(j, {"adjacent_cost", "stay_cost", "jump_base", "jumps", "jump_scope", "jump_radius", "obstacle_cost"},
                 "cost");
  CostParams p;
  read(j, "adjacent_cost", p.adjacent_cost);
  read(j, "stay_cost", p.stay_cost);
  read(j, "jump_base", p.jump_base);
  read(j, "jump_radius", p.jump_radius);
  read(j, "obstacle_cost", p.obstacle_cost);
  if (j.contains("jumps")) {
    const auto s = j.at("jumps").get<std::string>();
    if (s == "pow_manhattan") p.jump_rule = JumpRule::kPowManhattan;
    else if (s == "disabled") p.jump_rule = JumpRule::kDisabled;
    else throw ParseError("cost.jumps must be \"pow_manhattan\" or \"disabled\"");
  }
  if (j.contains("jump_scope")) {
    const auto s = j.at("jump_scope").get<std::string>();
    if (s == "restricted") p.jump_scope = JumpScope::kRestricted;
    else if (s == "full") p.jump_scope = JumpScope::kFull;
    else throw ParseError("cost.jump_scope must be \"restricted\" or \"full\"");
  }
  return p;
}

Json cost_json(const CostParams& p) {
  return {{"adjacent_cost", p.adjacent_cost},
          {"stay_cost", p.stay_cost},
          {"jump_base", p.jump_base},
          {"jumps", p.jump_rule == JumpRule::kDisabled ? "disabled" : "pow_manhattan"},
          {"jump_scope", p.jump_scope == JumpScope::kFull ? "full" : "restricted"},
          {"jump_radius", p.jump_radius},
          {"obstacle_cost", p.obstacle_cost}};
}

MpcConfig parse_mpc(const Json& j) {
  reject_unknown(j, {"horizon", "control_horizon", "dt", "q1", "q2", "p", "alpha", "v_min", "v_max", "omega_min",
                     "omega_max", "x_min", "x_max", "y_min", "y_max", "contraction_penalty", "penalty_rounds",
                     "max_iters", "step_size", "arrival_tolerance", "transition_time", "max_time"},
                 "mpc");
  MpcConfig c;
  read(j, "horizon", c.horizon);
  read(j, "control_horizon", c.control_horizon);
  read(j, "dt", c.dt);
  if (j.contains("q1")) c.q1 = parse_matrix(j.at("q1"), "q1");
  if (j.contains("q2")) c.q2 = parse_matrix(j.at("q2"), "q2");
  if (j.contains("p")) c.p = parse_matrix(j.at("p"), "p");
  read(j, "alpha", c.alpha);
  read(j, "v_min", c.u_bounds.v_min);
  read(j, "v_max", c.u_bounds.v_max);
  read(j, "omega_min", c.u_bounds.omega_min);
  read(j, "omega_max", c.u_bounds.omega_max);
  read(j, "x_min", c.x_bounds.x_min);
  read(j, "x_max", c.x_bounds.x_max);
  read(j, "y_min", c.x_bounds.y_min);
  read(j, "y_max", c.x_bounds.y_max);
  read(j, "contraction_penalty", c.contraction_penalty);
  read(j, "penalty_rounds", c.penalty_rounds);
  read(j, "max_iters", c.max_iters);
  read(j, "step_size", c.step_size);
  read(j, "arrival_tolerance", c.arrival_tolerance);
  read(j, "transition_time", c.transition_time);
  read(j, "max_time", c.max_time);
  c.validate();
  return c;
}

Json matrix_json(const Eigen::Matrix2d& m) { return Json::array({{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}); }

Json mpc_json(const MpcConfig& c) {
  Json j = {{"horizon", c.horizon},
            {"control_horizon", c.control_horizon},
            {"dt", c.dt},
            {"q1", matrix_json(c.q1)},
            {"q2", matrix_json(c.q2)},
            {"p", matrix_json(c.p)},
            {"alpha", c.alpha},
            {"v_min", c.u_bounds.v_min},
            {"v_max", c.u_bounds.v_max},
            {"omega_min", c.u_bounds.omega_min},
            {"omega_max", c.u_bounds.omega_max},
            {"contraction_penalty", c.contraction_penalty},
            {"penalty_rounds", c.penalty_rounds},
            {"max_iters", c.max_iters},
            {"step_size", c.step_size},
            {"arrival_tolerance", c.arrival_tolerance},
            {"transition_time", c.transition_time},
            {"max_time", c.max_time}};
  // Infinite bounds are the default and have no JSON spelling.
  auto bound = [&](const char* key, double v) {
    if (std::isfinite(v)) j[key] = v;
  };
  bound("x_min", c.x_bounds.x_min);
  bound("x_max", c.x_bounds.x_max);
  bound("y_min", c.x_bounds.y_min);
  bound("y_max", c.x_bounds.y_max);
  return j;
}

Json cells_json(const GridWorld& grid, const std::vector<CellId>& cells) {
  Json out = Json::array();
  for (CellId c : cells) out.push_back({grid.row(c), grid.col(c)});
  return out;
}

}  // namespace

ScenarioDescription parse_scenario_description(const Json& json) {
  try {
    reject_unknown(json,
                   {"rows", "cols", "cell_size", "origin", "connectivity", "obstacles", "robots", "targets", "cost",
                    "mpc", "seed", "name", "description"},
                   "scenario");
    if (!json.contains("rows") || !json.contains("cols")) throw ParseError("scenario needs rows and cols");
    ScenarioDescription d;
    d.rows = json.at("rows").get<int>();
    d.cols = json.at("cols").get<int>();
    read(json, "cell_size", d.cell_size);
    if (json.contains("origin")) {
      const Json& o = json.at("origin");
      if (!o.is_array() || o.size() != 2) throw ParseError("origin must be [x, y]");
      d.origin = Vec2(o[0].get<double>(), o[1].get<double>());
    }
    if (json.contains("connectivity")) d.connectivity = parse_connectivity(json.at("connectivity"));
    if (json.contains("obstacles")) {
      if (!json.at("obstacles").is_array()) throw ParseError("obstacles must be a list");
      for (const Json& o : json.at("obstacles")) {
        if (o.is_object()) {
          reject_unknown(o, {"r0", "c0", "r1", "c1"}, "obstacle rect");
          d.obstacle_rects.push_back({o.at("r0").get<int>(), o.at("c0").get<int>(), o.at("r1").get<int>(),
                                      o.at("c1").get<int>()});
        } else {
          d.obstacles.push_back(parse_rowcol(o, "obstacles"));
        }
      }
    }
    d.robots = parse_cells(json, "robots");
    d.targets = parse_cells(json, "targets");
    if (json.contains("cost")) d.cost = parse_cost(json.at("cost"));
    if (json.contains("mpc")) d.mpc = parse_mpc(json.at("mpc"));
    if (json.contains("seed")) d.seed = json.at("seed").get<std::uint64_t>();
    return d;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
}

ScenarioSpec parse_scenario(const Json& json) { return build_scenario(parse_scenario_description(json)); }

ScenarioSpec load_scenario(const std::string& path) {
  Json json;
  try {
    json = Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return parse_scenario(json);
}

Json to_json(const ScenarioSpec& s) {
  const GridWorld& g = s.grid;
  Json j = {{"rows", g.rows()},
            {"cols", g.cols()},
            {"cell_size", g.cell_size()},
            {"origin", {g.origin().x(), g.origin().y()}},
            {"connectivity", connectivity_name(g.connectivity())},
            {"obstacles", cells_json(g, g.obstacles())},
            {"robots", cells_json(g, s.robots)},
            {"targets", cells_json(g, s.targets)},
            {"cost", cost_json(s.cost)},
            {"mpc", mpc_json(s.mpc)}};
  if (s.seed) j["seed"] = *s.seed;
  return j;
}

std::vector<ObstacleEvent> parse_events(const Json& json, const GridWorld& grid) {
  try {
    reject_unknown(json, {"events"}, "events file");
    std::vector<ObstacleEvent> out;
    for (const Json& e : json.at("events")) {
      reject_unknown(e, {"time", "remove", "add"}, "event");
      ObstacleEvent event;
      event.time = e.at("time").get<double>();
      for (const char* key : {"remove", "add"}) {
        for (const RowCol& rc : parse_cells(e, key)) {
          if (rc.row < 0 || rc.row >= grid.rows() || rc.col < 0 || rc.col >= grid.cols()) {
            throw RangeError(std::string("event ") + key + " cell outside the grid");
          }
          (std::string(key) == "add" ? event.add : event.remove).push_back(grid.index(rc.row, rc.col));
        }
      }
      out.push_back(std::move(event));
    }
    return out;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("events: ") + e.what());
  }
}

std::vector<ObstacleEvent> load_events(const std::string& path, const GridWorld& grid) {
  try {
    return parse_events(Json::parse(read_text_file(path)), grid);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Json to_json(const TransportPlan& plan) {
  Json moves = Json::array();
  for (const Move& m : plan.moves) moves.push_back({m.from, m.to});
  Json costs = Json::array();
  for (const Move& m : plan.moves) costs.push_back(m.cost);
  return {{"mode", plan.mode == PlanMode::kBalanced ? "balanced" : "unbalanced"},
          {"total_cost", plan.total_cost},
          {"m", plan.moved_mass},
          {"moves", moves},
          {"move_costs", costs}};
}

Json to_json(const PathSystem& paths) {
  Json chains = Json::array();
  for (const Chain& c : paths.chains) {
    chains.push_back({{"robot", c.robot}, {"target", c.target}, {"cells", c.cells}, {"cost", c.cost}});
  }
  return {{"total_cost", paths.total_cost}, {"practically_feasible", paths.practically_feasible}, {"chains", chains}};
}

Json to_json(const std::vector<Wave>& waves) {
  Json out = Json::array();
  for (const Wave& w : waves) {
    Json j = to_json(w.paths);
    j["epoch"] = w.epoch;
    out.push_back(std::move(j));
  }
  return {{"waves", out}};
}

Json to_json(const RefinedPaths& refined) {
  return {{"factor", refined.refinement.factor},
          {"fine_rows", refined.refinement.fine.rows()},
          {"fine_cols", refined.refinement.fine.cols()},
          {"fine", to_json(refined.fine)},
          {"coarse_paths", refined.coarse_paths},
          {"world_cost", refined.world_cost}};
}

Json to_json(const OracleResult& oracle) {
  Json plans = Json::array();
  for (const TransportPlan& p : oracle.optimal_plans) plans.push_back(to_json(p));
  return {{"optimal_cost", oracle.optimal_cost ? Json(*oracle.optimal_cost) : Json(nullptr)},
          {"optimal_plans", plans},
          {"explored", oracle.explored}};
}

Json to_json(const Summary& s) {
  return {{"path_cost", s.path_cost},
          {"makespan", s.makespan},
          {"max_final_p_norm", s.max_final_p_norm},
          {"mean_final_p_norm", s.mean_final_p_norm},
          {"replan_count", s.replan_count},
          {"solve_seconds", s.solve_seconds}};
}

Json error_record(const std::exception& error) {
  const auto* typed = dynamic_cast<const Error*>(&error);
  return {{"error", {{"kind", typed ? typed->kind() : "InternalError"}, {"message", error.what()}}}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace otnav
