#include "imgep/ball_pusher_env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace imgep {

BallPusherEnv::BallPusherEnv(BallPusherConfig cfg) : cfg_(cfg) {
  if (cfg_.steps == 0 || !(cfg_.max_wheel_speed > 0.0) || !(cfg_.wheel_base > 0.0))
    throw std::invalid_argument("invalid ball pusher config");
}

BallPusherRollout BallPusherEnv::rollout(const PolicyParams& theta, const Context& c) const {
  if (theta.size() != kThetaDim) throw std::invalid_argument("ball pusher policy needs 8 parameters");
  if (c.size() != kContextDim) throw std::invalid_argument("ball pusher context needs 5 components");
  for (double v : c.values)
    if (!(v >= -1.0 && v <= 1.0)) throw std::invalid_argument("context component outside [-1, 1]");

  const double robot_lim = 1.0 - cfg_.robot_radius;
  const double ball_lim = 1.0 - cfg_.ball_radius;
  double x = std::clamp(c.values[0], -robot_lim, robot_lim);
  double y = std::clamp(c.values[1], -robot_lim, robot_lim);
  double heading = c.values[2] * std::numbers::pi;
  double bx = std::clamp(c.values[3], -ball_lim, ball_lim);
  double by = std::clamp(c.values[4], -ball_lim, ball_lim);
  const double bx0 = bx, by0 = by;

  auto wall_distance = [](double px, double py) {
    return std::min({1.0 - px, 1.0 + px, 1.0 - py, 1.0 + py});
  };

  BallPusherRollout out;
  out.robot_path.push_back({x, y});
  out.ball_path.push_back({bx, by});
  double min_wall = wall_distance(x, y);
  double energy = 0.0;

  const auto& w = theta.values;
  for (std::size_t t = 0; t < cfg_.steps; ++t) {
    const double rx = bx - x, ry = by - y;
    const double forward = std::cos(heading) * rx + std::sin(heading) * ry;
    const double lateral = -std::sin(heading) * rx + std::cos(heading) * ry;
    const std::array<double, 4> in{1.0, forward, lateral, wall_distance(x, y)};
    double left = 0.0, right = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      left += w[i] * in[i];
      right += w[4 + i] * in[i];
    }
    left = std::clamp(left, -1.0, 1.0);
    right = std::clamp(right, -1.0, 1.0);
    out.wheel_commands.push_back({left, right});
    energy += left * left + right * right;

    const double v = 0.5 * (left + right) * cfg_.max_wheel_speed;
    const double omega = (right - left) * cfg_.max_wheel_speed / cfg_.wheel_base;
    x = std::clamp(x + v * std::cos(heading), -robot_lim, robot_lim);
    y = std::clamp(y + v * std::sin(heading), -robot_lim, robot_lim);
    heading += omega;

    // Contact: the ball is pushed out along the centre line.
    const double dx = bx - x, dy = by - y;
    const double dist = std::hypot(dx, dy);
    const double contact = cfg_.robot_radius + cfg_.ball_radius;
    if (dist < contact) {
      const double nx = dist > 0.0 ? dx / dist : std::cos(heading);
      const double ny = dist > 0.0 ? dy / dist : std::sin(heading);
      bx = std::clamp(x + nx * contact, -ball_lim, ball_lim);
      by = std::clamp(y + ny * contact, -ball_lim, ball_lim);
    }
    out.robot_path.push_back({x, y});
    out.ball_path.push_back({bx, by});
    min_wall = std::min(min_wall, wall_distance(x, y));
  }

  out.outcome.ball_translation = {bx - bx0, by - by0};
  out.outcome.min_wall_distance = min_wall;
  out.outcome.energy = energy / static_cast<double>(cfg_.steps);
  return out;
}

}  // namespace imgep
