#pragma once

#include <span>
#include <string>
#include <vector>

#include "otnav/grid.hpp"
#include "otnav/plans.hpp"

namespace otnav {

// p(tau) = c0 + c1*tau + c2*tau^2 + c3*tau^3 for tau in [0, transition_time].
struct CubicSegment {
  Vec2 c0 = Vec2::Zero();
  Vec2 c1 = Vec2::Zero();
  Vec2 c2 = Vec2::Zero();
  Vec2 c3 = Vec2::Zero();
};

struct TrajectorySample {
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
};

// Catmull-Rom spline through equally spaced knots. Interior tangents are
// central differences, the two end tangents one-sided differences. Outside
// [0, duration] the trajectory holds its end points with zero velocity.
class ReferenceTrajectory {
 public:
  ReferenceTrajectory() = default;
  ReferenceTrajectory(std::vector<Vec2> knots, double transition_time, int robot = -1, int replan_index = 0);

  TrajectorySample sample(double t) const;

  int robot() const { return robot_; }
  int replan_index() const { return replan_index_; }
  double transition_time() const { return transition_time_; }
  double duration() const { return transition_time_ * static_cast<double>(segments_.size()); }
  const std::vector<Vec2>& knots() const { return knots_; }
  std::vector<double> knot_times() const;
  const std::vector<CubicSegment>& segments() const { return segments_; }

 private:
  int robot_ = -1;
  int replan_index_ = 0;
  double transition_time_ = 1.0;
  std::vector<Vec2> knots_;
  std::vector<CubicSegment> segments_;
};

// Knots at the chain's cell centers, one transition_time apart.
ReferenceTrajectory interpolate(const Chain& chain, const GridWorld& grid, double transition_time = 1.0,
                                int replan_index = 0);

// Same, but knot 0 is `start` (the robot's actual position), replacing the
// center of the chain's first cell.
ReferenceTrajectory interpolate_from(const Vec2& start, const Chain& chain, const GridWorld& grid,
                                     double transition_time = 1.0, int replan_index = 0);

// "t,x,y,vx,vy" rows sampled every `dt` from 0 through duration.
std::string reference_csv(const ReferenceTrajectory& trajectory, double dt);

}  // namespace otnav
