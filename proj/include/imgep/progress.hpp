#pragma once

#include <deque>
#include <map>

#include "imgep/core.hpp"
#include "imgep/kd_tree.hpp"

namespace imgep {

struct ProgressConfig {
  /// Number of intrinsic rewards averaged per space.
  std::size_t window = 50;
  /// When true, r' is the reward stored with the old experiment (measured against
  /// its own goal g') instead of the old outcome re-evaluated against the new goal.
  bool use_stored_reward = false;
  /// When true, goal-directed episodes that do not update progress are still
  /// appended to the history as comparison points.
  bool keep_explore_goals = false;
};

/// Learning-progress bookkeeping for a set of goal spaces.
///
/// r_i = R(g, o) - R(g, o') where o' is the outcome recorded with the most
/// similar earlier (goal, context) pair of the same space, the latest one on ties.
class ProgressTracker {
 public:
  struct Entry {
    Vector goal;
    Context context;
    Vector outcome;  // slice of the space
    double reward = 0.0;
    std::int64_t iteration = 0;
  };

  ProgressTracker(GoalSpaceRegistry spaces, std::size_t context_dim, ProgressConfig cfg = {});

  /// Intrinsic reward of reaching `outcome` (full vector) for goal g in context c,
  /// without recording anything. Zero when the space has no history.
  double intrinsic_reward(const Problem& g, const Context& c, const Outcome& outcome) const;

  /// Computes r_i as above, appends the episode to the history of g's space and
  /// pushes r_i into the running window. Returns r_i.
  double record(const Problem& g, const Context& c, const Outcome& outcome, std::int64_t iteration);

  /// Appends an episode to the history of g's space without producing an
  /// intrinsic reward (episodes that do not update progress still serve as
  /// comparison points later).
  void observe(const Problem& g, const Context& c, const Outcome& outcome, std::int64_t iteration);

  /// Mean of the last <= W intrinsic rewards of space `id` (0 without data).
  double average(int id) const;
  /// Running averages in registry order.
  Vector averages() const;

  const std::vector<Entry>& history(int id) const;
  const std::deque<double>& window(int id) const;
  const GoalSpaceRegistry& spaces() const { return spaces_; }
  const ProgressConfig& config() const { return cfg_; }

 private:
  struct PerSpace {
    std::vector<Entry> history;
    KdTree index;
    std::deque<double> recent;
  };
  const PerSpace& slot(int id) const;
  PerSpace& slot(int id);
  void append(const Problem& g, const Context& c, const Outcome& outcome, std::int64_t iteration);

  GoalSpaceRegistry spaces_;
  std::size_t context_dim_;
  ProgressConfig cfg_;
  std::map<int, PerSpace> per_space_;
};

}  // namespace imgep
