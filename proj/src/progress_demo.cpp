#include "imgep/progress_demo.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace imgep {

double CompetenceCurve::competence(double n) const {
  switch (kind) {
    case Kind::kSaturating: {
      // Logistic in the practice count, shifted so that n = 0 is chance level.
      auto s = [&](double m) { return 1.0 / (1.0 + std::exp(-(m - onset) / time_scale)); };
      const double s0 = s(0.0);
      return level * (s(n) - s0) / (1.0 - s0);
    }
    case Kind::kFlat:
    case Kind::kNoisy:
      return level;
  }
  return 0.0;
}

std::vector<CompetenceCurve> standard_demo_curves() {
  using K = CompetenceCurve::Kind;
  return {
      {"blue", K::kSaturating, 30.0, 10.0, 1.0, 0.0},
      {"orange", K::kSaturating, 120.0, 25.0, 1.0, 0.0},
      {"green", K::kSaturating, 300.0, 50.0, 1.0, 0.0},
      {"purple", K::kFlat, 0.0, 1.0, 0.3, 0.0},
      {"red", K::kNoisy, 0.0, 1.0, 0.1, 0.05},
  };
}

std::size_t DemoTrace::peak_step(std::size_t arm) const {
  if (frequencies.empty()) return 0;
  std::size_t best = std::min(trace_window ? trace_window - 1 : 0, frequencies.size() - 1);
  for (std::size_t t = best + 1; t < frequencies.size(); ++t)
    if (frequencies[t][arm] > frequencies[best][arm]) best = t;
  return best;
}

double DemoTrace::greedy_share(std::size_t arm, std::size_t from) const {
  std::size_t total = 0, hits = 0;
  for (std::size_t t = from; t < choices.size(); ++t) {
    if (uniform_branch[t]) continue;
    ++total;
    if (choices[t] == arm) ++hits;
  }
  return total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
}

DemoTrace synthetic_progress_demo(const std::vector<CompetenceCurve>& curves, const DemoConfig& cfg) {
  if (curves.empty()) throw std::invalid_argument("demo needs at least one curve");
  if (cfg.window == 0 || cfg.trace_window == 0) throw std::invalid_argument("demo windows must be positive");
  const std::size_t m = curves.size();
  Rng rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  auto measure = [&](std::size_t k, double n) {
    const auto& c = curves[k];
    double v = c.competence(n);
    if (c.kind == CompetenceCurve::Kind::kNoisy) v += c.noise * noise(rng);
    return v;
  };

  std::vector<double> practice(m, 0.0);
  std::vector<double> last(m);
  for (std::size_t k = 0; k < m; ++k) last[k] = measure(k, 0.0);
  std::vector<std::deque<double>> recent(m);
  Vector avg(m, 0.0);
  std::deque<std::size_t> trail;
  std::vector<std::size_t> counts(m, 0);

  DemoTrace out;
  for (const auto& c : curves) out.names.push_back(c.name);
  out.trace_window = cfg.trace_window;
  out.choices.reserve(cfg.steps);

  for (std::size_t t = 0; t < cfg.steps; ++t) {
    const BanditChoice choice = bandit_select(avg, rng, cfg.bandit);
    const std::size_t k = choice.arm;
    practice[k] += 1.0;
    const double now = measure(k, practice[k]);
    recent[k].push_back(now - last[k]);
    last[k] = now;
    if (recent[k].size() > cfg.window) recent[k].pop_front();
    avg[k] = std::accumulate(recent[k].begin(), recent[k].end(), 0.0) / static_cast<double>(recent[k].size());

    trail.push_back(k);
    ++counts[k];
    if (trail.size() > cfg.trace_window) {
      --counts[trail.front()];
      trail.pop_front();
    }
    Vector freq(m);
    for (std::size_t j = 0; j < m; ++j) freq[j] = static_cast<double>(counts[j]) / static_cast<double>(trail.size());

    out.choices.push_back(k);
    out.uniform_branch.push_back(choice.uniform_branch);
    out.averages.push_back(avg);
    out.frequencies.push_back(std::move(freq));
  }
  return out;
}

}  // namespace imgep
