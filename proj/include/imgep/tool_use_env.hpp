#pragma once

#include <array>
#include <memory>
#include <optional>
#include <random>
#include <string>

#include "imgep/config_file.hpp"
#include "imgep/core.hpp"
#include "imgep/dmp.hpp"

namespace imgep {

/// Result of executing one policy.
struct RolloutResult {
  Trajectory trajectory;
  Outcome outcome;
};

/// Interaction contract shared by the exploration engine and the evaluators:
/// observe a context, execute a policy, read the outcome.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::size_t context_dim() const = 0;
  virtual std::size_t theta_dim() const = 0;
  virtual std::size_t steps() const = 0;
  virtual const GoalSpaceRegistry& spaces() const = 0;

  virtual Context sample_context() const = 0;
  virtual RolloutResult rollout(const PolicyParams& theta, Rng& rng) = 0;
  /// Forces the context-carrying state; everything else goes back to rest.
  virtual void set_state(const Context& c) = 0;

  /// Outcome slice of space `id` for a roll-out in which the object never moved,
  /// or nullopt for objects that move on their own.
  virtual std::optional<Vector> rest_slice(int id, const Context& c) const = 0;

  virtual std::unique_ptr<Environment> clone() const = 0;
};

/// Goal space ids of the tool-use scene, in outcome order.
enum class ToolUseObject : int {
  kHand = 1,
  kLeftJoystick = 2,
  kRightJoystick = 3,
  kErgo = 4,
  kBall = 5,
  kLight = 6,
  kSound = 7,
  kDistractor1 = 8,
  kDistractor2 = 9,
  kRightHand = 10,
  kCamera = 11,
  kArena = 12,
  kYellowToy = 13,
  kRedButton = 14,
  kLamp = 15,
};

inline constexpr int space_id(ToolUseObject o) { return static_cast<int>(o); }

/// Physical constants of the simulated tool-use scene. Lengths are in the same
/// units as the link lengths; angles in radians.
struct ToolUseConfig {
  dmp::DmpConfig dmp = dmp::DmpConfig::standard();

  std::array<double, 4> link_lengths{0.5, 0.4, 0.3, 0.2};
  /// Joint angle reached for an action of +1 (Shoulder Y, Shoulder X, Arm Z, Elbow Y).
  std::array<double, 4> joint_ranges{1.5708, 1.0472, 1.5708, 1.5708};

  std::array<double, 3> left_joystick{0.6, 0.1, -1.2};
  std::array<double, 3> right_joystick{0.5, -0.2, -1.0};
  double joystick_radius = 0.15;
  /// Horizontal hand offset giving full deflection; larger offsets saturate.
  double joystick_throw = 0.11;
  double joystick_return_rate = 0.5;

  double ergo_rotation_gain = 0.1;
  double ergo_deadzone = 0.4;
  double ergo_extension_rate = 0.3;
  double ergo_tip_min_radius = 0.05;
  double ergo_tip_max_radius = 1.0;
  int ergo_reset_period = 40;

  double ball_contact_radius = 0.1;
  /// When set, the whole Ergo arm (centre to tip) sweeps the ball, not only the tip.
  bool ergo_arm_contact = false;
  double ball_rest_extension = 0.2;
  /// Angle between the Ergo and ball reference directions (radians).
  double ball_angle_offset = 0.7;
  double ball_slope_rate = 0.02;
  double ball_friction = 0.9;  // angular
  double ball_radial_friction = 0.97;
  double ball_border = 0.95;

  double light_threshold = 0.05;
  double light_scale = 0.3;
  double light_decay = 0.5;

  double distractor_noise = 0.05;
  std::size_t samples_per_object = 10;

  /// Throws ConfigError on inconsistent values.
  void validate() const;

  /// Reads `env.*` keys (absent keys keep their defaults).
  static ToolUseConfig from_config(const KeyValueConfig& kv);
  void write_to(KeyValueConfig& kv) const;
};

/// Full mutable state of the scene.
struct ToolUseState {
  std::array<double, 4> joints{};
  std::array<double, 3> hand{};
  std::array<double, 2> left_joystick{};
  std::array<double, 2> right_joystick{};
  double ergo_rotation = 0.0;   // radians, wrapped to [-pi, pi]
  double ergo_extension = 0.0;  // [0, 1]
  double ball_rotation = 0.0;   // radians, wrapped to [-pi, pi]
  double ball_extension = 0.0;  // radius in [0, 1]
  double ball_angular_velocity = 0.0;
  double ball_radial_velocity = 0.0;
  double light = 0.0;  // intensity in [0, 1]
  double sound = 0.0;  // pitch in [-1, 1]
  bool sounding = false;
  std::array<double, 2> distractor1{};
  std::array<double, 2> distractor2{};
  long long episodes = 0;
};

/// Which causal links fired during the last roll-out.
struct InteractionLog {
  bool left_joystick_touched = false;
  bool right_joystick_touched = false;
  bool ergo_driven = false;
  bool ball_contacted = false;
  bool ball_fast = false;
  bool ball_at_border = false;
};

/// Simulated arm / joysticks / Ergo / ball / light / sound scene with two
/// random-walk distractors and six static objects. 32 policy parameters,
/// 2D context (Ergo and ball rotation), 310D outcome made of 15 object spaces.
class ToolUseEnv final : public Environment {
 public:
  static constexpr std::size_t kStateDim = 31;

  explicit ToolUseEnv(ToolUseConfig cfg = {});

  std::size_t context_dim() const override { return 2; }
  std::size_t theta_dim() const override { return dmp::kJoints * dmp::kParamsPerJoint; }
  std::size_t steps() const override { return cfg_.dmp.n_steps; }
  const GoalSpaceRegistry& spaces() const override { return spaces_; }

  Context sample_context() const override;
  RolloutResult rollout(const PolicyParams& theta, Rng& rng) override;
  void set_state(const Context& c) override;
  /// set_state() that also places the ball at a given radius (the slope then pulls it back).
  void set_state(const Context& c, double ball_extension);
  std::optional<Vector> rest_slice(int id, const Context& c) const override;
  std::unique_ptr<Environment> clone() const override;

  /// Hand position for the given joint actions, before normalization.
  std::array<double, 3> forward_kinematics(const std::array<double, 4>& actions) const;

  /// Advances the scene by one step with the arm at `actions`.
  void step(const std::array<double, 4>& actions, Rng& rng);
  /// Exported state vector s_t (all components in [-1, 1]).
  Vector observe() const;

  const ToolUseState& state() const { return state_; }
  const ToolUseConfig& config() const { return cfg_; }
  const InteractionLog& last_interactions() const { return log_; }

  /// Exported ball extension at rest.
  double exported_rest_ball_extension() const;

  /// Names in outcome order; index i is space id i + 1.
  static const std::array<const char*, 15>& object_names();
  static GoalSpaceRegistry make_registry(std::size_t samples_per_object);

 private:
  void reset_after_rollout();

  ToolUseConfig cfg_;
  GoalSpaceRegistry spaces_;
  ToolUseState state_;
  InteractionLog log_;
};

}  // namespace imgep
