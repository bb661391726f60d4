#pragma once

#include <string>

#include "otnav/plans.hpp"
#include "otnav/simulation.hpp"

namespace otnav {

struct RenderOptions {
  double pixels_per_unit = 24.0;
};

// Cells as rect class="cell" (obstacles grey), robots as triangles, targets
// as circles, each chain as one polyline class="path".
std::string render_svg(const ScenarioSpec& scenario, const PathSystem& paths, const RenderOptions& options = {});

// Obstacles from the log's final grid; per robot one orange reference curve
// (class="reference") and one green tracked curve (class="tracked").
std::string render_svg(const ScenarioSpec& scenario, const SimulationLog& log, const RenderOptions& options = {});

}  // namespace otnav
