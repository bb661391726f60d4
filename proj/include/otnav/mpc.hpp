#pragma once

#include <span>
#include <vector>

#include "otnav/mpc_config.hpp"
#include "otnav/trajectory.hpp"

namespace otnav {

// Unicycle pose; theta is kept in (-pi, pi].
struct RobotState {
  double px = 0.0;
  double py = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {px, py}; }
};

struct ControlInput {
  double v = 0.0;
  double omega = 0.0;
};

struct TrackingError {
  Vec2 e = Vec2::Zero();
  double p_norm = 0.0;
};

double wrap_angle(double angle);

// One RK4 step of px' = v cos(theta), py' = v sin(theta), theta' = omega.
RobotState step_dynamics(const RobotState& state, const ControlInput& u, double dt);

// ||e||_P = sqrt(e' P e).
double p_norm(const Vec2& e, const Eigen::Matrix2d& p);
TrackingError tracking_error(const RobotState& state, const ReferenceTrajectory& reference, double t,
                             const Eigen::Matrix2d& p);

struct MpcSolution {
  std::vector<ControlInput> controls;  // one per dt over the cost horizon
  std::vector<RobotState> predicted;   // states at t + k*dt, k = 0..H
  double cost = 0.0;                   // discretized J (tracking + control terms)
  double p_norm_start = 0.0;           // ||e(t)||_P
  double p_norm_end = 0.0;             // ||e(t + Tc)||_P
  bool contraction_satisfied = false;
  int iterations = 0;
};

// Contractive tracking MPC by single shooting: piecewise-constant controls,
// adjoint gradient, projection onto the control box, exterior penalties for
// the position box and for ||e(t+Tc)||_P <= alpha ||e(t)||_P with escalation,
// then a Gauss-Newton pass on the contraction residual. `t` is the reference
// time at the start of the horizon. Never throws on an unmet contraction; see
// the flag.
MpcSolution solve_mpc(const RobotState& state, const ReferenceTrajectory& reference, double t,
                      const MpcConfig& config, std::span<const ControlInput> warm_start = {});

// As solve_mpc, but throws InfeasibleMpcError when the contraction fails.
MpcSolution solve_mpc_strict(const RobotState& state, const ReferenceTrajectory& reference, double t,
                             const MpcConfig& config, std::span<const ControlInput> warm_start = {});

}  // namespace otnav
