#pragma once

#include <limits>

#include <Eigen/Core>

namespace otnav {

struct ControlBounds {
  double v_min = -2.5;
  double v_max = 2.5;
  double omega_min = -4.0;
  double omega_max = 4.0;
};

// Position box; heading is unconstrained.
struct PositionBounds {
  double x_min = -std::numeric_limits<double>::infinity();
  double x_max = std::numeric_limits<double>::infinity();
  double y_min = -std::numeric_limits<double>::infinity();
  double y_max = std::numeric_limits<double>::infinity();
};

struct MpcConfig {
  double horizon = 2.0;          // T, seconds
  double control_horizon = 0.5;  // Tc, seconds
  double dt = 0.05;
  Eigen::Matrix2d q1 = Eigen::Vector2d(10.0, 10.0).asDiagonal();
  Eigen::Matrix2d q2 = Eigen::Vector2d(0.1, 0.1).asDiagonal();
  Eigen::Matrix2d p = Eigen::Matrix2d::Identity();
  double alpha = 0.9;
  ControlBounds u_bounds;
  PositionBounds x_bounds;
  double contraction_penalty = 1e3;
  int penalty_rounds = 3;
  int max_iters = 40;
  double step_size = 1.0;

  // Closed-loop settings.
  double arrival_tolerance = 0.25;  // in cell widths
  double transition_time = 1.0;     // seconds per cell step of the reference
  double max_time = 600.0;

  int steps_per_horizon() const;
  int steps_per_control() const;

  // ConfigError when an invariant (Tc < T, dt divides both, PD weights,
  // alpha in (0,1), ordered bounds) fails.
  void validate() const;
};

}  // namespace otnav
