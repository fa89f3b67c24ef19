#pragma once

#include <array>
#include <vector>

#include "imgep/core.hpp"

namespace imgep {

/// Differential-drive robot in the square arena [-1, 1]^2 with a ball it can push.
///
/// The policy is a linear sensor-to-motor map: wheel commands are
/// clamp(W * [1, ball_forward, ball_lateral, wall_distance], -1, 1) where W is
/// theta reshaped to 2 x 4 (left wheel row first).
/// Context: robot x, y, heading / pi, ball x, y.
struct BallPusherConfig {
  std::size_t steps = 50;
  double max_wheel_speed = 0.04;
  double wheel_base = 0.2;
  double robot_radius = 0.1;
  double ball_radius = 0.05;
};

struct BallPusherRollout {
  BallPusherOutcome outcome;
  std::vector<std::array<double, 2>> robot_path;  // start position, then one entry per step
  std::vector<std::array<double, 2>> ball_path;
  std::vector<std::array<double, 2>> wheel_commands;  // normalized, one per step
};

class BallPusherEnv {
 public:
  static constexpr std::size_t kContextDim = 5;
  static constexpr std::size_t kThetaDim = 8;

  explicit BallPusherEnv(BallPusherConfig cfg = {});

  /// Deterministic roll-out. Throws std::invalid_argument on wrong dimensions or
  /// a context that puts the robot or the ball outside the arena.
  BallPusherRollout rollout(const PolicyParams& theta, const Context& c) const;

  const BallPusherConfig& config() const { return cfg_; }

 private:
  BallPusherConfig cfg_;
};

}  // namespace imgep
