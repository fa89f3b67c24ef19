#include "imgep/policy_search.hpp"

#include <algorithm>
#include <cmath>

namespace imgep {

PatternSearchResult pattern_search(const Vector& x0, const std::function<double(const Vector&)>& f,
                                   std::size_t budget, const PatternSearchConfig& cfg,
                                   const std::function<bool(double)>& stop) {
  if (!(cfg.initial_step > 0.0) || !(cfg.min_step > 0.0) || cfg.lower > cfg.upper)
    throw std::invalid_argument("invalid pattern search configuration");
  PatternSearchResult res{x0, 0.0, 0, false};
  if (budget == 0) return res;

  res.best_value = f(res.best);
  res.evaluations = 1;
  if (stop && stop(res.best_value)) {
    res.stopped_early = true;
    return res;
  }

  double step = cfg.initial_step;
  while (step >= cfg.min_step) {
    bool improved = false;
    for (std::size_t i = 0; i < res.best.size(); ++i) {
      for (double dir : {1.0, -1.0}) {
        if (res.evaluations >= budget) return res;
        Vector x = res.best;
        x[i] = std::clamp(x[i] + dir * step, cfg.lower, cfg.upper);
        if (x[i] == res.best[i]) continue;
        const double v = f(x);
        ++res.evaluations;
        const bool halt = stop && stop(v);
        if (v > res.best_value) {
          res.best = std::move(x);
          res.best_value = v;
          improved = true;
        }
        if (halt) {
          res.stopped_early = true;
          return res;
        }
        if (improved) break;
      }
    }
    if (!improved) step *= 0.5;
  }
  return res;
}

PolicyParams optimize_with_surrogate(const MetaPolicyArchive& archive, const Problem& p,
                                     const Context& c, std::size_t budget,
                                     const SurrogateConfig& scfg, const PatternSearchConfig& pcfg) {
  PolicyParams theta0 = archive.sample_meta_policy(p, c);
  if (budget == 0 || archive.size() < scfg.neighbors) return theta0;
  const SurrogateModel model(archive, p, scfg);
  auto score = [&](const Vector& x) { return model.predict(c, PolicyParams{x}); };
  return PolicyParams{pattern_search(theta0.values, score, budget, pcfg).best};
}

DirectSearchResult optimize_direct(const std::function<DirectEvaluation(const PolicyParams&)>& evaluate,
                                   const PolicyParams& theta0, std::size_t budget,
                                   const DirectSearchConfig& cfg) {
  DirectSearchResult out;
  out.best = theta0;
  if (budget == 0) return out;

  std::optional<Context> start;
  bool drifted = false;
  auto f = [&](const Vector& x) {
    const DirectEvaluation e = evaluate(PolicyParams{x});
    ++out.rollouts;
    if (!start) start = e.context;
    else if (euclidean_distance(e.context.values, start->values) > cfg.max_context_drift) drifted = true;
    return e.reward;
  };
  auto stop = [&](double r) { return drifted || r > cfg.reward_threshold; };

  const PatternSearchResult res = pattern_search(theta0.values, f, budget, cfg.search, stop);
  out.best = PolicyParams{res.best};
  out.best_reward = res.best_value;
  if (drifted) out.reason = DirectSearchResult::Stop::kContextDrift;
  else if (res.stopped_early) out.reason = DirectSearchResult::Stop::kReachedGoal;
  else if (res.evaluations < budget) out.reason = DirectSearchResult::Stop::kConverged;
  return out;
}

DirectSearchResult optimize_direct(Environment& env, MetaPolicyArchive& archive, const Problem& g,
                                   std::size_t budget, Rng& rng, std::int64_t first_iteration,
                                   const DirectSearchConfig& cfg) {
  const Context c0 = env.sample_context();
  const PolicyParams theta0 = archive.empty() ? PolicyParams{Vector(env.theta_dim(), 0.0)}
                                              : archive.sample_meta_policy(g, c0);
  std::int64_t iteration = first_iteration;
  auto evaluate = [&](const PolicyParams& theta) {
    const Context c = env.sample_context();
    RolloutResult r = env.rollout(theta, rng);
    const double reward = modular_reward(g, r.outcome, env.spaces());
    archive.add(Experiment{c, theta, std::move(r.outcome), std::move(r.trajectory), iteration++});
    return DirectEvaluation{c, reward};
  };
  return optimize_direct(evaluate, theta0, budget, cfg);
}

}  // namespace imgep
