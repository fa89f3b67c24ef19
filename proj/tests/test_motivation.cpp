#include <cmath>
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "imgep/bandit.hpp"
#include "imgep/progress.hpp"
#include "imgep/progress_demo.hpp"

using namespace imgep;

namespace {

GoalSpaceRegistry registry() {
  return GoalSpaceRegistry({make_box_space(1, "a", 0, 2, 1, 10), make_box_space(2, "b", 2, 1, 1, 100)});
}

Outcome outcome(double a0, double a1, double b) { return Outcome{{a0, a1, b}}; }

}  // namespace

TEST_CASE("intrinsic reward: empty history, repeats and improvements") {
  auto reg = registry();
  ProgressTracker t(reg, 1);
  const Problem g{1, {0.5, 0.5}};
  const Context c{{0.0}};
  CHECK(t.intrinsic_reward(g, c, outcome(0, 0, 0)) == 0.0);
  CHECK(t.record(g, c, outcome(0, 0, 0), 0) == 0.0);
  CHECK(t.history(1).size() == 1);
  CHECK(t.window(1).size() == 1);

  CHECK(t.record(g, c, outcome(0, 0, 0), 1) == 0.0);

  // Closer by delta in normalized distance.
  const double diag = 2.0 * std::sqrt(2.0);
  const double before = -std::hypot(0.5, 0.5) / diag;
  const double after = -std::hypot(0.25, 0.25) / diag;
  const double ri = t.record(g, c, outcome(0.25, 0.25, 0), 2);
  CHECK(ri == doctest::Approx(after - before).epsilon(1e-14));
  CHECK(ri > 0.0);
}

TEST_CASE("intrinsic reward re-evaluates the nearest old outcome under the new goal") {
  auto reg = registry();
  ProgressTracker t(reg, 1);
  t.record(Problem{1, {1, 1}}, Context{{0}}, outcome(0.2, 0.2, 0), 0);
  t.record(Problem{1, {-1, -1}}, Context{{0}}, outcome(-0.9, -0.9, 0), 1);
  // Nearest (goal, context) to ((0.9, 0.9), 0) is the first entry.
  const Problem g{1, {0.9, 0.9}};
  const double diag = 2.0 * std::sqrt(2.0);
  const double old_under_new = -std::hypot(0.7, 0.7) / diag;
  const double now = -std::hypot(0.1, 0.1) / diag;
  CHECK(t.intrinsic_reward(g, Context{{0}}, outcome(0.8, 0.8, 0)) == doctest::Approx(now - old_under_new));

  ProgressConfig stored;
  stored.use_stored_reward = true;
  ProgressTracker s(reg, 1, stored);
  s.record(Problem{1, {1, 1}}, Context{{0}}, outcome(0.2, 0.2, 0), 0);
  const double old_stored = -std::hypot(0.8, 0.8) / diag;
  CHECK(s.intrinsic_reward(g, Context{{0}}, outcome(0.8, 0.8, 0)) == doctest::Approx(now - old_stored));
}

TEST_CASE("observe extends the comparison history without touching the window") {
  auto reg = registry();
  ProgressTracker t(reg, 1);
  t.observe(Problem{2, {0.5}}, Context{{0}}, outcome(0, 0, -0.5), 0);
  CHECK(t.history(2).size() == 1);
  CHECK(t.window(2).empty());
  CHECK(t.average(2) == 0.0);
  CHECK(t.record(Problem{2, {0.5}}, Context{{0}}, outcome(0, 0, 0.5), 1) == doctest::Approx(0.5));
}

TEST_CASE("running average equals the mean of the last W rewards") {
  auto reg = registry();
  ProgressConfig cfg;
  cfg.window = 7;
  ProgressTracker t(reg, 1, cfg);
  Rng rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> raw;
  for (int i = 0; i < 60; ++i) {
    Problem g{2, {u(rng)}};
    raw.push_back(t.record(g, Context{{u(rng)}}, outcome(0, 0, u(rng)), i));
    const std::size_t n = std::min<std::size_t>(raw.size(), 7);
    const double mean = std::accumulate(raw.end() - n, raw.end(), 0.0) / n;
    CHECK(t.average(2) == doctest::Approx(mean).epsilon(1e-14));
    CHECK(t.averages()[1] == t.average(2));
    CHECK(t.averages()[0] == 0.0);
  }
  CHECK(t.history(2).size() == 60);
}

TEST_CASE("intrinsic rewards telescope on a fixed goal") {
  auto reg = registry();
  ProgressTracker t(reg, 1);
  const Problem g{2, {0.8}};
  double sum = 0;
  std::vector<double> outs{-0.9, -0.5, -0.2, 0.1, 0.4, 0.7};
  for (std::size_t i = 0; i < outs.size(); ++i) sum += t.record(g, Context{{0}}, outcome(0, 0, outs[i]), i);
  const double total = (-std::abs(0.8 - outs.back()) + std::abs(0.8 - outs.front())) / 2.0;
  CHECK(sum == doctest::Approx(total).epsilon(1e-14));
}

TEST_CASE("tracker rejects bad input") {
  auto reg = registry();
  ProgressTracker t(reg, 1);
  CHECK_THROWS(t.record(Problem{3, {0}}, Context{{0}}, outcome(0, 0, 0), 0));
  CHECK_THROWS(t.record(Problem{1, {0}}, Context{{0}}, outcome(0, 0, 0), 0));
  CHECK_THROWS(t.record(Problem{2, {0}}, Context{{0, 0}}, outcome(0, 0, 0), 0));
  ProgressConfig zero;
  zero.window = 0;
  CHECK_THROWS_AS(ProgressTracker(reg, 1, zero), std::invalid_argument);
}

// ---------------------------------------------------------------------------

TEST_CASE("bandit probabilities closed form") {
  const Vector r{0.3, 0.1, 0.0, -0.2};
  auto g = greedy_probabilities(r);
  const double a = std::exp(0.3 / 0.4), b = std::exp(0.1 / 0.4);
  CHECK(g[0] == doctest::Approx(a / (a + b)).epsilon(1e-14));
  CHECK(g[1] == doctest::Approx(b / (a + b)).epsilon(1e-14));
  CHECK(g[2] == 0.0);
  CHECK(g[3] == 0.0);

  auto p = bandit_probabilities(r);
  CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0));
  CHECK(p[0] == doctest::Approx(0.05 + 0.8 * a / (a + b)));
  CHECK(p[2] == doctest::Approx(0.05));

  Rng rng(2);
  std::array<int, 4> greedy_counts{};
  int greedy = 0;
  for (int i = 0; i < 20000; ++i) {
    auto c = bandit_select(r, rng);
    if (c.uniform_branch) continue;
    ++greedy;
    ++greedy_counts[c.arm];
  }
  CHECK(greedy_counts[2] == 0);
  CHECK(greedy_counts[3] == 0);
  CHECK(greedy_counts[0] > greedy_counts[1]);
  CHECK(static_cast<double>(greedy) / 20000 == doctest::Approx(0.8).epsilon(0.02));
}

TEST_CASE("bandit falls back to uniform without positive progress") {
  const Vector r(5, 0.0);
  Rng rng(3);
  std::array<int, 5> counts{};
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++counts[bandit_select(r, rng).arm];
  const double sigma = std::sqrt(n * 0.2 * 0.8);
  for (int c : counts) CHECK(std::abs(c - n * 0.2) < 3 * sigma);
  for (double p : bandit_probabilities(Vector{-1, -2, 0})) CHECK(p == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("single arm and errors") {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) CHECK(bandit_select(Vector{-0.3}, rng).arm == 0);
  CHECK_THROWS_AS(bandit_select(Vector{}, rng), std::invalid_argument);
  BanditConfig bad;
  bad.random_fraction = 1.5;
  CHECK_THROWS_AS(bandit_probabilities(Vector{0.1}, bad), std::invalid_argument);
}

TEST_CASE("bandit symmetry and scale invariance of the argmax") {
  const Vector r{0.05, 0.2, -0.1, 0.12, 0.0};
  auto p = bandit_probabilities(r);
  const Vector perm{r[3], r[0], r[4], r[1], r[2]};
  auto q = bandit_probabilities(perm);
  CHECK(q[0] == doctest::Approx(p[3]));
  CHECK(q[1] == doctest::Approx(p[0]));
  CHECK(q[2] == doctest::Approx(p[4]));
  CHECK(q[3] == doctest::Approx(p[1]));
  CHECK(q[4] == doctest::Approx(p[2]));

  for (double s : {0.01, 3.0, 1000.0}) {
    Vector scaled = r;
    for (auto& v : scaled) if (v > 0) v *= s;
    auto ps = bandit_probabilities(scaled);
    CHECK(std::max_element(ps.begin(), ps.end()) - ps.begin() == std::max_element(p.begin(), p.end()) - p.begin());
    // The normalization by the sum makes the whole distribution scale free.
    for (std::size_t k = 0; k < ps.size(); ++k) CHECK(ps[k] == doctest::Approx(p[k]));
  }
}

TEST_CASE("goal sampling is uniform in the box") {
  auto s = make_box_space(1, "x", 0, 2, 1, 10);
  Rng rng(5);
  double sum0 = 0, sum1 = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    auto p = sample_goal(s, rng);
    REQUIRE(p.space_id == 1);
    REQUIRE(p.target.size() == 2);
    for (double v : p.target) REQUIRE(std::abs(v) <= 1.0);
    sum0 += p.target[0];
    sum1 += p.target[1];
  }
  const double sigma = std::sqrt(1.0 / 3.0 / n);
  CHECK(std::abs(sum0 / n) < 3 * sigma);
  CHECK(std::abs(sum1 / n) < 3 * sigma);

  // Every orthant within 100 draws (failure probability 4 * 0.75^100 < 1e-12).
  for (int trial = 0; trial < 50; ++trial) {
    std::array<bool, 4> hit{};
    for (int i = 0; i < 100; ++i) {
      auto p = sample_goal(s, rng);
      hit[(p.target[0] > 0) * 2 + (p.target[1] > 0)] = true;
    }
    CHECK((hit[0] && hit[1] && hit[2] && hit[3]));
  }
}

// ---------------------------------------------------------------------------

TEST_CASE("demo: single learnable curve among flat ones dominates the greedy branch") {
  using K = CompetenceCurve::Kind;
  std::vector<CompetenceCurve> curves{{"flat1", K::kFlat, 0, 1, 0.2, 0},
                                      {"learn", K::kSaturating, 0, 300, 1.0, 0},
                                      {"flat2", K::kFlat, 0, 1, 0.5, 0}};
  DemoConfig cfg;
  cfg.steps = 800;
  auto tr = synthetic_progress_demo(curves, cfg);
  CHECK(tr.greedy_share(1, 20) > 0.95);
}

TEST_CASE("demo: staggered curves peak in midpoint order, flat and noisy arms are ignored") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    DemoConfig cfg;
    cfg.seed = seed;
    auto tr = synthetic_progress_demo(standard_demo_curves(), cfg);
    CHECK(tr.choices.size() == cfg.steps);
    CHECK(tr.peak_step(0) < tr.peak_step(1));
    CHECK(tr.peak_step(1) < tr.peak_step(2));
    CHECK(tr.greedy_share(3, 500) < 0.05);
    // Long-run frequency of the flat arm is close to the uniform floor 0.2 / 5.
    std::size_t flat = 0;
    for (std::size_t t = 2000; t < tr.choices.size(); ++t) flat += tr.choices[t] == 3;
    CHECK(static_cast<double>(flat) / (tr.choices.size() - 2000) < 0.08);
  }
}

TEST_CASE("demo is deterministic under a fixed seed") {
  DemoConfig cfg;
  cfg.seed = 9;
  cfg.steps = 1000;
  auto a = synthetic_progress_demo(standard_demo_curves(), cfg);
  auto b = synthetic_progress_demo(standard_demo_curves(), cfg);
  CHECK(a.choices == b.choices);
  CHECK(a.frequencies == b.frequencies);
  cfg.seed = 10;
  auto c = synthetic_progress_demo(standard_demo_curves(), cfg);
  CHECK(a.choices != c.choices);
}

TEST_CASE("scripted competence curves") {
  using K = CompetenceCurve::Kind;
  const CompetenceCurve rise{"r", K::kSaturating, 100.0, 20.0, 0.8, 0.0};
  CHECK(rise.competence(0.0) == 0.0);
  const double s0 = 1.0 / (1.0 + std::exp(5.0));
  CHECK(rise.competence(100.0) == doctest::Approx(0.8 * (0.5 - s0) / (1.0 - s0)).epsilon(1e-14));
  CHECK(rise.competence(1000.0) == doctest::Approx(0.8).epsilon(1e-12));
  for (double n = 1; n < 400; n += 1) CHECK(rise.competence(n) > rise.competence(n - 1));
  // Steepest rise at the midpoint.
  const double at_mid = rise.competence(101) - rise.competence(99);
  CHECK(at_mid > rise.competence(61) - rise.competence(59));
  CHECK(at_mid > rise.competence(141) - rise.competence(139));
  CHECK(CompetenceCurve{"f", K::kFlat, 0, 1, 0.3, 0}.competence(57) == 0.3);
}
