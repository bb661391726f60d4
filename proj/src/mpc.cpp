#include "otnav/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "otnav/errors.hpp"

namespace otnav {

int MpcConfig::steps_per_horizon() const { return static_cast<int>(std::lround(horizon / dt)); }

int MpcConfig::steps_per_control() const { return static_cast<int>(std::lround(control_horizon / dt)); }

void MpcConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("mpc dt must be positive");
  if (!(control_horizon > 0.0) || !(control_horizon < horizon)) {
    throw ConfigError("mpc needs 0 < control_horizon < horizon");
  }
  auto divides = [&](double span) { return std::abs(span / dt - std::round(span / dt)) < 1e-9; };
  if (!divides(horizon) || !divides(control_horizon)) throw ConfigError("dt must divide T and Tc");
  auto positive_definite = [](const Eigen::Matrix2d& m) {
    if (!m.isApprox(m.transpose())) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(m);
    return eig.eigenvalues().minCoeff() > 0.0;
  };
  if (!positive_definite(q1) || !positive_definite(q2) || !positive_definite(p)) {
    throw ConfigError("Q1, Q2 and P must be symmetric positive definite");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (u_bounds.v_min > u_bounds.v_max || u_bounds.omega_min > u_bounds.omega_max) {
    throw ConfigError("control bounds are inverted");
  }
  if (x_bounds.x_min > x_bounds.x_max || x_bounds.y_min > x_bounds.y_max) {
    throw ConfigError("position bounds are inverted");
  }
  if (contraction_penalty <= 0.0 || penalty_rounds < 0 || max_iters < 1 || !(step_size > 0.0)) {
    throw ConfigError("optimizer parameters must be positive");
  }
  if (!(arrival_tolerance > 0.0) || !(transition_time > 0.0) || !(max_time > 0.0)) {
    throw ConfigError("arrival_tolerance, transition_time and max_time must be positive");
  }
}

double wrap_angle(double angle) {
  constexpr double kPi = std::numbers::pi;
  double a = std::remainder(angle, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

namespace {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat32 = Eigen::Matrix<double, 3, 2>;

Vec3 unicycle(const Vec3& x, double v, double omega) {
  return {v * std::cos(x[2]), v * std::sin(x[2]), omega};
}

Mat3 unicycle_dx(const Vec3& x, double v) {
  Mat3 a = Mat3::Zero();
  a(0, 2) = -v * std::sin(x[2]);
  a(1, 2) = v * std::cos(x[2]);
  return a;
}

Mat32 unicycle_du(const Vec3& x) {
  Mat32 b = Mat32::Zero();
  b(0, 0) = std::cos(x[2]);
  b(1, 0) = std::sin(x[2]);
  b(2, 1) = 1.0;
  return b;
}

struct StepJacobian {
  Mat3 a;
  Mat32 b;
};

Vec3 rk4(const Vec3& x, double v, double omega, double h, StepJacobian* jac = nullptr) {
  const Vec3 k1 = unicycle(x, v, omega);
  const Vec3 x2 = x + 0.5 * h * k1;
  const Vec3 k2 = unicycle(x2, v, omega);
  const Vec3 x3 = x + 0.5 * h * k2;
  const Vec3 k3 = unicycle(x3, v, omega);
  const Vec3 x4 = x + h * k3;
  const Vec3 k4 = unicycle(x4, v, omega);
  if (jac != nullptr) {
    const Mat3 I = Mat3::Identity();
    const Mat3 a1 = unicycle_dx(x, v);
    const Mat32 b1 = unicycle_du(x);
    const Mat3 f2 = unicycle_dx(x2, v);
    const Mat3 a2 = f2 * (I + 0.5 * h * a1);
    const Mat32 b2 = f2 * (0.5 * h * b1) + unicycle_du(x2);
    const Mat3 f3 = unicycle_dx(x3, v);
    const Mat3 a3 = f3 * (I + 0.5 * h * a2);
    const Mat32 b3 = f3 * (0.5 * h * b2) + unicycle_du(x3);
    const Mat3 f4 = unicycle_dx(x4, v);
    const Mat3 a4 = f4 * (I + h * a3);
    const Mat32 b4 = f4 * (h * b3) + unicycle_du(x4);
    jac->a = I + (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    jac->b = (h / 6.0) * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
  }
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

constexpr double kContractionSlack = 1e-9;
constexpr double kBoxPenalty = 1e4;

// Shooting problem over a fixed horizon. Controls are stored as
// [v_0, omega_0, v_1, omega_1, ...].
class ShootingProblem {
 public:
  ShootingProblem(const RobotState& state, const ReferenceTrajectory& reference, double t, const MpcConfig& cfg)
      : cfg_(cfg), h_(cfg.steps_per_horizon()), nc_(cfg.steps_per_control()) {
    x0_ = Vec3(state.px, state.py, state.theta);
    ref_.resize(h_ + 1);
    ref_vel_.resize(h_ + 1);
    for (int k = 0; k <= h_; ++k) {
      const TrajectorySample s = reference.sample(t + cfg.dt * k);
      ref_[k] = s.position;
      ref_vel_[k] = s.velocity;
    }
    e0_norm_ = p_norm(x0_.head<2>() - ref_[0], cfg.p);
    lower_ = Eigen::VectorXd(2 * h_);
    upper_ = Eigen::VectorXd(2 * h_);
    for (int k = 0; k < h_; ++k) {
      lower_[2 * k] = cfg.u_bounds.v_min;
      upper_[2 * k] = cfg.u_bounds.v_max;
      lower_[2 * k + 1] = cfg.u_bounds.omega_min;
      upper_[2 * k + 1] = cfg.u_bounds.omega_max;
    }
  }

  int size() const { return 2 * h_; }
  int horizon_steps() const { return h_; }
  int control_steps() const { return nc_; }
  double e0_norm() const { return e0_norm_; }
  double contraction_bound() const { return cfg_.alpha * e0_norm_ + kContractionSlack; }

  Eigen::VectorXd project(Eigen::VectorXd u) const { return u.cwiseMax(lower_).cwiseMin(upper_); }

  // Reference feed-forward, used when no warm start is available.
  Eigen::VectorXd initial_guess(std::span<const ControlInput> warm) const {
    Eigen::VectorXd u(2 * h_);
    double heading = x0_[2];
    for (int k = 0; k < h_; ++k) {
      if (k < static_cast<int>(warm.size())) {
        u[2 * k] = warm[k].v;
        u[2 * k + 1] = warm[k].omega;
        continue;
      }
      const Vec2& vel = ref_vel_[k];
      const double speed = vel.norm();
      double omega = 0.0;
      if (speed > 1e-9) {
        omega = wrap_angle(std::atan2(vel.y(), vel.x()) - heading) / cfg_.dt;
        omega = std::clamp(omega, cfg_.u_bounds.omega_min, cfg_.u_bounds.omega_max);
      }
      heading += omega * cfg_.dt;
      u[2 * k] = speed;
      u[2 * k + 1] = omega;
    }
    return project(u);
  }

  // Penalized cost; fills `positions` with the predicted path when given.
  double cost(const Eigen::VectorXd& u, double rho, std::vector<Vec3>* states = nullptr) const {
    Vec3 x = x0_;
    if (states) states->assign(1, x);
    double j = 0.0;
    for (int k = 0; k < h_; ++k) {
      const Eigen::Vector2d uk = u.segment<2>(2 * k);
      j += cfg_.dt * uk.dot(cfg_.q2 * uk);
      x = rk4(x, uk[0], uk[1], cfg_.dt);
      if (states) states->push_back(x);
      j += stage_cost(k + 1, x, rho);
    }
    return j;
  }

  double tracking_cost(const Eigen::VectorXd& u) const { return cost(u, 0.0) - box_cost(u); }

  double box_cost(const Eigen::VectorXd& u) const {
    Vec3 x = x0_;
    double j = 0.0;
    for (int k = 0; k < h_; ++k) {
      x = rk4(x, u[2 * k], u[2 * k + 1], cfg_.dt);
      j += box_violation(x);
    }
    return j;
  }

  double cost_and_gradient(const Eigen::VectorXd& u, double rho, Eigen::VectorXd& grad) const {
    std::vector<Vec3> xs(h_ + 1);
    std::vector<StepJacobian> jac(h_);
    xs[0] = x0_;
    double j = 0.0;
    for (int k = 0; k < h_; ++k) {
      const Eigen::Vector2d uk = u.segment<2>(2 * k);
      j += cfg_.dt * uk.dot(cfg_.q2 * uk);
      xs[k + 1] = rk4(xs[k], uk[0], uk[1], cfg_.dt, &jac[k]);
      j += stage_cost(k + 1, xs[k + 1], rho);
    }
    grad.resize(2 * h_);
    Vec3 lambda = stage_gradient(h_, xs[h_], rho);
    for (int k = h_ - 1; k >= 0; --k) {
      const Eigen::Vector2d uk = u.segment<2>(2 * k);
      grad.segment<2>(2 * k) = jac[k].b.transpose() * lambda + 2.0 * cfg_.dt * (cfg_.q2 * uk);
      lambda = jac[k].a.transpose() * lambda;
      if (k >= 1) lambda += stage_gradient(k, xs[k], rho);
    }
    return j;
  }

  // Position error at t + Tc and its Jacobian w.r.t. the first Nc controls.
  Vec2 contraction_error(const Eigen::VectorXd& u, Eigen::Matrix<double, 2, Eigen::Dynamic>* g) const {
    std::vector<StepJacobian> jac(nc_);
    Vec3 x = x0_;
    for (int k = 0; k < nc_; ++k) x = rk4(x, u[2 * k], u[2 * k + 1], cfg_.dt, g ? &jac[k] : nullptr);
    if (g) {
      g->resize(2, 2 * nc_);
      Eigen::Matrix<double, 2, 3> m = Eigen::Matrix<double, 2, 3>::Zero();
      m(0, 0) = 1.0;
      m(1, 1) = 1.0;
      for (int k = nc_ - 1; k >= 0; --k) {
        g->block<2, 2>(0, 2 * k) = m * jac[k].b;
        m = m * jac[k].a;
      }
    }
    return x.head<2>() - ref_[nc_];
  }

  double contraction_norm(const Eigen::VectorXd& u) const {
    return p_norm(contraction_error(u, nullptr), cfg_.p);
  }

 private:
  double box_violation(const Vec3& x) const {
    const PositionBounds& b = cfg_.x_bounds;
    const double vx = std::max(0.0, b.x_min - x[0]) + std::max(0.0, x[0] - b.x_max);
    const double vy = std::max(0.0, b.y_min - x[1]) + std::max(0.0, x[1] - b.y_max);
    return kBoxPenalty * (vx * vx + vy * vy);
  }

  double stage_cost(int k, const Vec3& x, double rho) const {
    const Vec2 e = x.head<2>() - ref_[k];
    double j = cfg_.dt * e.dot(cfg_.q1 * e) + box_violation(x);
    if (k == nc_ && rho > 0.0) {
      const double excess = std::max(0.0, p_norm(e, cfg_.p) - cfg_.alpha * e0_norm_);
      j += rho * excess * excess;
    }
    return j;
  }

  Vec3 stage_gradient(int k, const Vec3& x, double rho) const {
    const Vec2 e = x.head<2>() - ref_[k];
    Vec3 g = Vec3::Zero();
    g.head<2>() = 2.0 * cfg_.dt * (cfg_.q1 * e);
    const PositionBounds& b = cfg_.x_bounds;
    if (x[0] < b.x_min) g[0] -= 2.0 * kBoxPenalty * (b.x_min - x[0]);
    if (x[0] > b.x_max) g[0] += 2.0 * kBoxPenalty * (x[0] - b.x_max);
    if (x[1] < b.y_min) g[1] -= 2.0 * kBoxPenalty * (b.y_min - x[1]);
    if (x[1] > b.y_max) g[1] += 2.0 * kBoxPenalty * (x[1] - b.y_max);
    if (k == nc_ && rho > 0.0) {
      const double norm = p_norm(e, cfg_.p);
      const double excess = norm - cfg_.alpha * e0_norm_;
      if (excess > 0.0 && norm > 0.0) g.head<2>() += 2.0 * rho * excess * (cfg_.p * e) / norm;
    }
    return g;
  }

  const MpcConfig& cfg_;
  int h_;
  int nc_;
  Vec3 x0_;
  std::vector<Vec2> ref_;
  std::vector<Vec2> ref_vel_;
  double e0_norm_ = 0.0;
  Eigen::VectorXd lower_, upper_;
};

// Projected gradient with Barzilai-Borwein steps and Armijo backtracking.
int minimize(const ShootingProblem& problem, double rho, const MpcConfig& cfg, Eigen::VectorXd& u) {
  Eigen::VectorXd grad;
  double j = problem.cost_and_gradient(u, rho, grad);
  double step = cfg.step_size;
  int iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    Eigen::VectorXd candidate;
    double j_new = j;
    bool accepted = false;
    for (int halvings = 0; halvings < 40; ++halvings) {
      candidate = problem.project(u - step * grad);
      const double decrease = grad.dot(u - candidate);
      if (decrease <= 0.0) break;
      j_new = problem.cost(candidate, rho);
      if (j_new <= j - 1e-4 * decrease) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    Eigen::VectorXd grad_new;
    j_new = problem.cost_and_gradient(candidate, rho, grad_new);
    const Eigen::VectorXd s = candidate - u;
    const Eigen::VectorXd y = grad_new - grad;
    const double sy = s.dot(y);
    step = sy > 1e-16 ? std::clamp(s.squaredNorm() / sy, 1e-6, 1e3) : cfg.step_size;
    const bool converged = std::abs(j - j_new) <= 1e-12 * (1.0 + std::abs(j));
    u = std::move(candidate);
    grad = std::move(grad_new);
    j = j_new;
    if (converged) break;
  }
  return iter;
}

// Levenberg-Marquardt on e(t+Tc) toward a point inside the contraction ball,
// adjusting only the applied controls.
void restore_contraction(const ShootingProblem& problem, const MpcConfig& cfg, Eigen::VectorXd& u) {
  const int nc = problem.control_steps();
  Eigen::Matrix<double, 2, Eigen::Dynamic> g;
  Vec2 e = problem.contraction_error(u, &g);
  const double norm = p_norm(e, cfg.p);
  const double goal_norm = 0.5 * cfg.alpha * problem.e0_norm();
  const Vec2 goal = norm > 0.0 ? Vec2(e * std::min(1.0, goal_norm / norm)) : Vec2(Vec2::Zero());

  for (int iter = 0; iter < 30; ++iter) {
    if (p_norm(e, cfg.p) <= problem.contraction_bound() - 0.5 * kContractionSlack) return;
    const Vec2 r = e - goal;
    const Eigen::Matrix2d ggt = g * g.transpose();
    const double damping = 1e-12 * (1.0 + ggt.trace());
    const Vec2 y = (ggt + damping * Eigen::Matrix2d::Identity()).ldlt().solve(r);
    const Eigen::VectorXd delta = -(g.transpose() * y);
    double scale = 1.0;
    bool improved = false;
    for (int halvings = 0; halvings < 30; ++halvings) {
      Eigen::VectorXd candidate = u;
      candidate.head(2 * nc) += scale * delta;
      candidate = problem.project(candidate);
      Eigen::Matrix<double, 2, Eigen::Dynamic> g_new;
      const Vec2 e_new = problem.contraction_error(candidate, &g_new);
      if ((e_new - goal).norm() < r.norm()) {
        u = std::move(candidate);
        e = e_new;
        g = std::move(g_new);
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) return;
  }
}

}  // namespace

RobotState step_dynamics(const RobotState& state, const ControlInput& u, double dt) {
  if (!(dt > 0.0)) throw RangeError("dt must be positive");
  const Vec3 x = rk4(Vec3(state.px, state.py, state.theta), u.v, u.omega, dt);
  return {x[0], x[1], wrap_angle(x[2])};
}

double p_norm(const Vec2& e, const Eigen::Matrix2d& p) { return std::sqrt(std::max(0.0, e.dot(p * e))); }

TrackingError tracking_error(const RobotState& state, const ReferenceTrajectory& reference, double t,
                             const Eigen::Matrix2d& p) {
  const Vec2 e = state.position() - reference.sample(t).position;
  return {e, p_norm(e, p)};
}

MpcSolution solve_mpc(const RobotState& state, const ReferenceTrajectory& reference, double t,
                      const MpcConfig& config, std::span<const ControlInput> warm_start) {
  config.validate();
  const ShootingProblem problem(state, reference, t, config);
  Eigen::VectorXd u = problem.initial_guess(warm_start);

  MpcSolution out;
  double rho = config.contraction_penalty;
  out.iterations += minimize(problem, rho, config, u);
  for (int round = 0; round < config.penalty_rounds; ++round) {
    if (problem.contraction_norm(u) <= problem.contraction_bound()) break;
    rho *= 10.0;
    out.iterations += minimize(problem, rho, config, u);
  }
  if (problem.contraction_norm(u) > problem.contraction_bound()) restore_contraction(problem, config, u);

  std::vector<Vec3> states;
  problem.cost(u, 0.0, &states);
  out.cost = problem.tracking_cost(u);
  out.controls.resize(problem.horizon_steps());
  for (int k = 0; k < problem.horizon_steps(); ++k) out.controls[k] = {u[2 * k], u[2 * k + 1]};
  for (const Vec3& x : states) out.predicted.push_back({x[0], x[1], wrap_angle(x[2])});
  out.p_norm_start = problem.e0_norm();
  out.p_norm_end = problem.contraction_norm(u);
  out.contraction_satisfied = out.p_norm_end <= problem.contraction_bound();
  return out;
}

MpcSolution solve_mpc_strict(const RobotState& state, const ReferenceTrajectory& reference, double t,
                             const MpcConfig& config, std::span<const ControlInput> warm_start) {
  MpcSolution solution = solve_mpc(state, reference, t, config, warm_start);
  if (!solution.contraction_satisfied) {
    throw InfeasibleMpcError("contraction ||e(t+Tc)||_P = " + std::to_string(solution.p_norm_end) +
                             " exceeds alpha * ||e(t)||_P = " +
                             std::to_string(config.alpha * solution.p_norm_start));
  }
  return solution;
}

}  // namespace otnav
