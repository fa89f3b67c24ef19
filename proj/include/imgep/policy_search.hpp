#pragma once

#include <functional>

#include "imgep/archive.hpp"
#include "imgep/surrogate.hpp"
#include "imgep/tool_use_env.hpp"

namespace imgep {

struct PatternSearchConfig {
  double initial_step = 0.2;
  double min_step = 1e-3;
  double lower = -1.0;
  double upper = 1.0;
};

struct PatternSearchResult {
  Vector best;
  double best_value = 0.0;
  std::size_t evaluations = 0;
  bool stopped_early = false;
};

/// Coordinate pattern search maximizing f inside the box. Each coordinate is
/// probed at +step then -step; the first improving probe is accepted. The step
/// halves after a sweep without improvement. Stops when the step falls below
/// min_step, after `budget` evaluations (the start point included), or when
/// `stop` returns true for the latest evaluation. With budget 0, x0 is returned
/// without evaluating f.
PatternSearchResult pattern_search(const Vector& x0, const std::function<double(const Vector&)>& f,
                                   std::size_t budget, const PatternSearchConfig& cfg = {},
                                   const std::function<bool(double)>& stop = {});

/// Offline search on a locally weighted surrogate of the reward of p in context c,
/// started from the meta-policy answer. Falls back to that answer when the archive
/// holds fewer than K experiments. Never touches an environment.
PolicyParams optimize_with_surrogate(const MetaPolicyArchive& archive, const Problem& p,
                                     const Context& c, std::size_t budget,
                                     const SurrogateConfig& scfg = {},
                                     const PatternSearchConfig& pcfg = {});

struct DirectEvaluation {
  Context context;  // context the roll-out was executed in
  double reward = 0.0;
};

struct DirectSearchConfig {
  PatternSearchConfig search;
  double reward_threshold = -0.01;
  double max_context_drift = 0.2;
};

struct DirectSearchResult {
  PolicyParams best;
  double best_reward = 0.0;
  std::size_t rollouts = 0;
  enum class Stop { kBudget, kConverged, kReachedGoal, kContextDrift } reason = Stop::kBudget;
};

/// Online search with real roll-outs. `evaluate` executes theta and is
/// responsible for archiving the experiment.
DirectSearchResult optimize_direct(const std::function<DirectEvaluation(const PolicyParams&)>& evaluate,
                                   const PolicyParams& theta0, std::size_t budget,
                                   const DirectSearchConfig& cfg = {});

/// Same search against an environment; every roll-out is added to the archive.
/// The search starts from Pi(g, c), or from theta = 0 when the archive is empty.
DirectSearchResult optimize_direct(Environment& env, MetaPolicyArchive& archive, const Problem& g,
                                   std::size_t budget, Rng& rng, std::int64_t first_iteration = 0,
                                   const DirectSearchConfig& cfg = {});

}  // namespace imgep
