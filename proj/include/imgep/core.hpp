#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imgep {

using Vector = std::vector<double>;
using Rng = std::mt19937_64;

/// Observed configuration of the scene before a roll-out. Components in [-1, 1].
struct Context {
  Vector values;

  std::size_t size() const { return values.size(); }
  bool operator==(const Context&) const = default;
};

/// Motor parameters of a policy. Components in [-1, 1].
struct PolicyParams {
  Vector values;

  std::size_t size() const { return values.size(); }
  bool operator==(const PolicyParams&) const = default;

  /// Clamps every component into [-1, 1].
  void clip();
};

/// Behavioural trajectory of one roll-out. states[t] is the scene after action[t] was applied.
struct Trajectory {
  std::vector<Vector> states;
  std::vector<Vector> actions;

  std::size_t length() const { return states.size(); }
};

/// Concatenated per-object outcome vector. Slices are addressed through a GoalSpaceRegistry.
struct Outcome {
  Vector full;

  bool operator==(const Outcome&) const = default;
};

/// Discretization used by the exploration (coverage) measure of one space.
/// The slice is read as `samples` consecutive groups of `variables` values.
struct CoverageSpec {
  std::size_t variables = 0;
  std::size_t samples = 0;
  std::size_t bins_per_axis = 0;
};

/// One modular problem / outcome space O^k.
struct GoalSpaceSpec {
  int id = 0;
  std::string name;
  std::size_t dim = 0;
  std::size_t offset = 0;
  double max_distance = 0.0;
  CoverageSpec coverage;
};

/// Builds a spec whose max_distance is the diagonal of [-1, 1]^dim.
GoalSpaceSpec make_box_space(int id, std::string name, std::size_t offset,
                             std::size_t variables, std::size_t samples,
                             std::size_t bins_per_axis);

/// Ordered set of goal spaces partitioning the full outcome vector.
class GoalSpaceRegistry {
 public:
  GoalSpaceRegistry() = default;
  /// Throws std::invalid_argument unless the specs tile [0, total) in order
  /// with unique ids and positive max distances.
  explicit GoalSpaceRegistry(std::vector<GoalSpaceSpec> specs);

  const GoalSpaceSpec& at(int id) const;
  const GoalSpaceSpec* find(int id) const;
  const GoalSpaceSpec* find(std::string_view name) const;
  bool contains(int id) const { return find(id) != nullptr; }

  const std::vector<GoalSpaceSpec>& spaces() const { return specs_; }
  std::vector<int> ids() const;
  std::size_t size() const { return specs_.size(); }
  std::size_t total_dim() const { return total_dim_; }

  std::span<const double> slice(const Outcome& o, int id) const;
  std::span<const double> slice(std::span<const double> full, int id) const;

  /// Splits an outcome into per-space vectors (declaration order).
  std::vector<Vector> split(const Outcome& o) const;
  /// Inverse of split().
  Outcome concatenate(const std::vector<Vector>& parts) const;

 private:
  std::vector<GoalSpaceSpec> specs_;
  std::size_t total_dim_ = 0;
};

/// A goal: a target point in one goal space.
struct Problem {
  int space_id = 0;
  Vector target;
};

/// One (c, theta, o) tuple of the knowledge base.
struct Experiment {
  Context context;
  PolicyParams theta;
  Outcome outcome;
  std::optional<Trajectory> trajectory;
  std::int64_t iteration = 0;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

// -- rewards ---------------------------------------------------------------

/// R(p, c, theta, o) = -||p - o_k|| / max_distance_k.
double modular_reward(const Problem& p, const Outcome& o, const GoalSpaceRegistry& spaces);

/// Same reward on an already extracted slice.
double modular_reward(const GoalSpaceSpec& space, std::span<const double> target,
                      std::span<const double> outcome_slice);

/// Goal of the ball-pushing example: target ball translation and weights.
struct BallPusherGoal {
  std::array<double, 2> translation{};
  double alpha = 0.0;
  double beta = 0.0;
};

/// Descriptors of one ball-pushing roll-out.
struct BallPusherOutcome {
  std::array<double, 2> ball_translation{};  // d1
  double min_wall_distance = 0.0;            // d2
  double energy = 0.0;                       // d3
};

/// alpha * exp(-|d_g - d1|^2) + beta * d2 + (1 - alpha - beta) * exp(-d3^2).
/// Throws std::invalid_argument when the weights are negative or sum above one.
double ball_pusher_reward(const BallPusherGoal& g, const Context& c, const BallPusherOutcome& o);

/// Reward function of all problems induced by one stored experiment.
class PartialReward {
 public:
  PartialReward(Context c, PolicyParams theta, Outcome o, const GoalSpaceRegistry& spaces);

  double operator()(const Problem& p) const;
  std::vector<double> evaluate(std::span<const Problem> problems) const;

  const Outcome& outcome() const { return outcome_; }

 private:
  Context context_;
  PolicyParams theta_;
  Outcome outcome_;
  GoalSpaceRegistry spaces_;
};

PartialReward partial_reward_function(const Context& c, const PolicyParams& theta,
                                      const Outcome& o, const GoalSpaceRegistry& spaces);

}  // namespace imgep
