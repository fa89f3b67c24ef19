#pragma once

#include "imgep/core.hpp"

namespace imgep {

struct BanditConfig {
  /// Probability of a uniform draw over all arms.
  double random_fraction = 0.2;
};

/// Arm probabilities inside the goal-directed branch only: proportional to
/// exp(r_k / sum of positive r) over arms with r_k > 0, zero elsewhere. Uniform
/// when no arm is positive.
Vector greedy_probabilities(std::span<const double> averages);

/// Full selection probabilities: random_fraction uniform + the rest greedy.
Vector bandit_probabilities(std::span<const double> averages, const BanditConfig& cfg = {});

struct BanditChoice {
  std::size_t arm = 0;
  bool uniform_branch = false;
};

/// Draws an arm index. Throws std::invalid_argument without arms.
BanditChoice bandit_select(std::span<const double> averages, Rng& rng, const BanditConfig& cfg = {});

/// Uniform goal in [-1, 1]^dim of the given space.
Problem sample_goal(const GoalSpaceSpec& space, Rng& rng);

}  // namespace imgep
