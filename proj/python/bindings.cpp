#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "otnav/errors.hpp"
#include "otnav/generator.hpp"
#include "otnav/io.hpp"
#include "otnav/metrics.hpp"
#include "otnav/mpc.hpp"
#include "otnav/oracle.hpp"
#include "otnav/plans.hpp"
#include "otnav/render.hpp"
#include "otnav/simulation.hpp"
#include "otnav/transport.hpp"

namespace py = pybind11;
using namespace otnav;

namespace {

// Structured results cross the boundary as JSON text; the Python package
// decodes them into plain dicts.
std::string dump(const Json& j) { return j.dump(); }

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what());
  }
}

Backend backend_of(const std::string& s) {
  if (s == "flow") return Backend::kFlow;
  if (s == "dense") return Backend::kDense;
  throw ConfigError("backend must be 'flow' or 'dense'");
}

Connectivity connectivity_of(const std::string& s) {
  if (s == "4") return Connectivity::kFour;
  if (s == "8") return Connectivity::kEight;
  if (s == "8-strict") return Connectivity::kEightStrict;
  throw ConfigError("connectivity must be '4', '8' or '8-strict'");
}

}  // namespace

PYBIND11_MODULE(_otnav, m) {
  m.doc() = "Optimal-transport multi-robot planning core";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<GridWorld>(m, "GridWorld")
      .def(py::init([](int rows, int cols, const std::vector<CellId>& obstacles, const std::string& connectivity) {
             return GridWorld(rows, cols, 1.0, Vec2(0.5, 0.5), obstacles, connectivity_of(connectivity));
           }),
           py::arg("rows"), py::arg("cols"), py::arg("obstacles") = std::vector<CellId>{},
           py::arg("connectivity") = "8")
      .def_property_readonly("rows", &GridWorld::rows)
      .def_property_readonly("cols", &GridWorld::cols)
      .def_property_readonly("cell_count", &GridWorld::cell_count)
      .def_property_readonly("obstacles", &GridWorld::obstacles)
      .def("neighbors", &GridWorld::neighbors)
      .def("cell_center",
           [](const GridWorld& g, CellId c) {
             const Vec2 p = g.cell_center(c);
             return std::pair(p.x(), p.y());
           })
      .def("locate", [](const GridWorld& g, double x, double y) { return g.locate(Vec2(x, y)); })
      .def("refine", [](const GridWorld& g, int s) {
        Refinement r = refine(g, s);
        return std::pair(r.fine, r.fine_to_coarse);
      });

  py::class_<ScenarioSpec>(m, "Scenario")
      .def_readonly("grid", &ScenarioSpec::grid)
      .def_readonly("robots", &ScenarioSpec::robots)
      .def_readonly("targets", &ScenarioSpec::targets)
      .def("to_json", [](const ScenarioSpec& s) { return dump(to_json(s)); });

  m.def("parse_scenario", [](const std::string& text) { return parse_scenario(parse_text(text)); });
  m.def("load_scenario", &load_scenario);
  m.def("generate_scenario", [](int rows, int cols, int robots, int targets, int rects, std::uint64_t seed) {
    GeneratorParams p;
    p.rows = rows;
    p.cols = cols;
    p.robots = robots;
    p.targets = targets;
    p.obstacle_rects = rects;
    p.seed = seed;
    return generate_scenario(p);
  });

  m.def(
      "solve",
      [](const ScenarioSpec& s, bool unbalanced, const std::string& backend) {
        return dump(to_json(solve(s, unbalanced, backend_of(backend))));
      },
      py::arg("scenario"), py::arg("unbalanced") = false, py::arg("backend") = "flow");
  m.def("paths", [](const ScenarioSpec& s) { return dump(to_json(extract_chains(solve(s), s))); });
  m.def("lemma1", [](const ScenarioSpec& s) {
    const Lemma1Report r = validate_lemma1(solve(s), s);
    return std::tuple(r.integral, r.disjoint, r.coverage);
  });
  m.def("simple_replan", [](const ScenarioSpec& s) { return dump(to_json(simple_replan(s))); });
  m.def("refine_replan", [](const ScenarioSpec& s, int factor) { return dump(to_json(refine_replan(s, factor))); });
  m.def("oracle", [](const ScenarioSpec& s) { return dump(to_json(brute_force_oracle(s))); });
  m.def(
      "simulate",
      [](const ScenarioSpec& s, const std::string& events) {
        const auto ev = events.empty() ? std::vector<ObstacleEvent>{} : parse_events(parse_text(events), s.grid);
        const SimulationLog log = run_mpc_ot(s, ev);
        Json j = to_json(summarize(log));
        j["all_arrived"] = log.all_arrived();
        j["assigned_target"] = log.assigned_target;
        j["rows"] = log.rows.size();
        return dump(j);
      },
      py::arg("scenario"), py::arg("events") = "");
  m.def("render_paths", [](const ScenarioSpec& s) { return render_svg(s, extract_chains(solve(s), s)); });
  m.def("step_dynamics", [](double px, double py, double theta, double v, double omega, double dt) {
    const RobotState x = step_dynamics({px, py, theta}, {v, omega}, dt);
    return std::tuple(x.px, x.py, x.theta);
  });
}
