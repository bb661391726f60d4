#include "otnav/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "otnav/errors.hpp"

namespace otnav {

ReferenceTrajectory::ReferenceTrajectory(std::vector<Vec2> knots, double transition_time, int robot,
                                         int replan_index)
    : robot_(robot), replan_index_(replan_index), transition_time_(transition_time), knots_(std::move(knots)) {
  if (knots_.empty()) throw RangeError("trajectory needs at least one knot");
  if (!(transition_time > 0.0)) throw RangeError("transition_time must be positive");
  const std::size_t n = knots_.size();
  if (n == 1) return;

  const double h = transition_time_;
  std::vector<Vec2> tangent(n);
  tangent[0] = (knots_[1] - knots_[0]) / h;
  tangent[n - 1] = (knots_[n - 1] - knots_[n - 2]) / h;
  for (std::size_t k = 1; k + 1 < n; ++k) tangent[k] = (knots_[k + 1] - knots_[k - 1]) / (2.0 * h);

  segments_.resize(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const Vec2& p0 = knots_[k];
    const Vec2& p1 = knots_[k + 1];
    const Vec2& m0 = tangent[k];
    const Vec2& m1 = tangent[k + 1];
    CubicSegment& s = segments_[k];
    s.c0 = p0;
    s.c1 = m0;
    s.c2 = (3.0 * (p1 - p0) / h - 2.0 * m0 - m1) / h;
    s.c3 = (2.0 * (p0 - p1) / h + m0 + m1) / (h * h);
  }
}

std::vector<double> ReferenceTrajectory::knot_times() const {
  std::vector<double> out(knots_.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = transition_time_ * static_cast<double>(k);
  return out;
}

TrajectorySample ReferenceTrajectory::sample(double t) const {
  if (segments_.empty() || t <= 0.0) {
    // t < 0 clamps to the first knot at rest.
    TrajectorySample s{knots_.front(), Vec2::Zero()};
    if (!segments_.empty() && t == 0.0) s.velocity = segments_.front().c1;
    return s;
  }
  const double h = transition_time_;
  if (t > duration()) return {knots_.back(), Vec2::Zero()};

  // Knot times are hit exactly so interpolation is exact there.
  const double k_real = t / h;
  const double k_round = std::round(k_real);
  std::size_t index;
  double tau;
  if (std::abs(k_real - k_round) <= 1e-12 * std::max(1.0, k_real)) {
    index = static_cast<std::size_t>(k_round);
    if (index >= segments_.size()) {
      const CubicSegment& last = segments_.back();
      return {knots_.back(), last.c1 + 2.0 * last.c2 * h + 3.0 * last.c3 * h * h};
    }
    return {knots_[index], segments_[index].c1};
  }
  index = std::min(segments_.size() - 1, static_cast<std::size_t>(std::floor(k_real)));
  tau = t - h * static_cast<double>(index);
  const CubicSegment& s = segments_[index];
  return {s.c0 + tau * (s.c1 + tau * (s.c2 + tau * s.c3)), s.c1 + tau * (2.0 * s.c2 + 3.0 * tau * s.c3)};
}

ReferenceTrajectory interpolate(const Chain& chain, const GridWorld& grid, double transition_time,
                                int replan_index) {
  if (chain.cells.empty()) throw RangeError("cannot interpolate an empty chain");
  std::vector<Vec2> knots;
  knots.reserve(chain.cells.size());
  for (CellId cell : chain.cells) knots.push_back(grid.cell_center(cell));
  return ReferenceTrajectory(std::move(knots), transition_time, chain.robot, replan_index);
}

ReferenceTrajectory interpolate_from(const Vec2& start, const Chain& chain, const GridWorld& grid,
                                     double transition_time, int replan_index) {
  if (chain.cells.empty()) throw RangeError("cannot interpolate an empty chain");
  std::vector<Vec2> knots{start};
  for (std::size_t i = 1; i < chain.cells.size(); ++i) knots.push_back(grid.cell_center(chain.cells[i]));
  if (chain.cells.size() == 1) knots.push_back(grid.cell_center(chain.cells.front()));
  return ReferenceTrajectory(std::move(knots), transition_time, chain.robot, replan_index);
}

std::string reference_csv(const ReferenceTrajectory& trajectory, double dt) {
  if (!(dt > 0.0)) throw RangeError("sampling step must be positive");
  std::ostringstream out;
  out << "t,x,y,vx,vy\n";
  const auto steps = static_cast<long>(std::floor(trajectory.duration() / dt + 1e-9));
  char line[160];
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const TrajectorySample s = trajectory.sample(t);
    std::snprintf(line, sizeof(line), "%.6f,%.9f,%.9f,%.9f,%.9f\n", t, s.position.x(), s.position.y(),
                  s.velocity.x(), s.velocity.y());
    out << line;
  }
  return out.str();
}

}  // namespace otnav
