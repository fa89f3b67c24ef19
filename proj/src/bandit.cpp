#include "imgep/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace imgep {

Vector greedy_probabilities(std::span<const double> averages) {
  const std::size_t n = averages.size();
  if (n == 0) throw std::invalid_argument("bandit needs at least one arm");
  double total = 0.0;
  for (double r : averages)
    if (r > 0.0) total += r;
  if (!(total > 0.0)) return Vector(n, 1.0 / static_cast<double>(n));

  // Exponents lie in (0, 1], so no overflow guard is needed.
  Vector p(n, 0.0);
  double z = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (averages[k] > 0.0) {
      p[k] = std::exp(averages[k] / total);
      z += p[k];
    }
  }
  for (double& v : p) v /= z;
  return p;
}

Vector bandit_probabilities(std::span<const double> averages, const BanditConfig& cfg) {
  if (cfg.random_fraction < 0.0 || cfg.random_fraction > 1.0)
    throw std::invalid_argument("bandit random fraction must be in [0, 1]");
  Vector p = greedy_probabilities(averages);
  const double u = cfg.random_fraction / static_cast<double>(p.size());
  for (double& v : p) v = u + (1.0 - cfg.random_fraction) * v;
  return p;
}

namespace {

std::size_t draw(const Vector& p, Rng& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    acc += p[k];
    last = k;
    if (u < acc) return k;
  }
  return last;  // rounding at the top end
}

}  // namespace

BanditChoice bandit_select(std::span<const double> averages, Rng& rng, const BanditConfig& cfg) {
  if (averages.empty()) throw std::invalid_argument("bandit needs at least one arm");
  if (cfg.random_fraction < 0.0 || cfg.random_fraction > 1.0)
    throw std::invalid_argument("bandit random fraction must be in [0, 1]");
  const bool uniform = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < cfg.random_fraction;
  if (uniform) {
    std::uniform_int_distribution<std::size_t> pick(0, averages.size() - 1);
    return {pick(rng), true};
  }
  return {draw(greedy_probabilities(averages), rng), false};
}

Problem sample_goal(const GoalSpaceSpec& space, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Problem p{space.id, Vector(space.dim)};
  for (double& v : p.target) v = u(rng);
  return p;
}

}  // namespace imgep
