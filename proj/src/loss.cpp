#include "imgep/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "imgep/bandit.hpp"

namespace imgep {

LossEstimate evaluate_loss(const MetaPolicyArchive& policy, const Environment& env,
                           const TestDistribution& test, Rng& rng) {
  if (test.samples == 0) throw std::invalid_argument("loss estimate needs at least one sample");
  if (policy.empty()) throw BootstrapRequired();
  const auto& space = env.spaces().at(test.space_id);
  auto world = env.clone();
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < test.samples; ++i) {
    const Problem p = sample_goal(space, rng);
    Context c{Vector(env.context_dim())};
    for (double& v : c.values) v = u(rng);
    world->set_state(c);
    const PolicyParams theta = policy.sample_meta_policy(p, c);
    const RolloutResult r = world->rollout(theta, rng);
    const double loss = -modular_reward(p, r.outcome, env.spaces());
    sum += loss;
    sum_sq += loss * loss;
  }
  const auto n = static_cast<double>(test.samples);
  LossEstimate e;
  e.samples = test.samples;
  e.mean = sum / n;
  if (test.samples > 1) {
    const double var = std::max(0.0, (sum_sq - n * e.mean * e.mean) / (n - 1.0));
    e.standard_error = std::sqrt(var / n);
  }
  return e;
}

}  // namespace imgep
