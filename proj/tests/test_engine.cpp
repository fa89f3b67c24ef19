#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "imgep/engine.hpp"

using namespace imgep;
namespace fs = std::filesystem;

namespace {

RunConfig config(Condition c, std::size_t n, std::uint64_t seed = 1) {
  RunConfig cfg;
  cfg.condition = c;
  cfg.iterations = n;
  cfg.seed = seed;
  return cfg;
}

std::vector<EpisodeRecord> run(const RunConfig& cfg) {
  Explorer e(cfg);
  std::vector<EpisodeRecord> out;
  for (std::size_t i = 0; i < cfg.iterations; ++i) out.push_back(e.run_episode());
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("imgep_engine_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("condition names") {
  for (auto c : {Condition::kRandom, Condition::kRmb, Condition::kSgs, Condition::kFc, Condition::kAmb})
    CHECK(parse_condition(to_string(c)) == c);
  CHECK(parse_condition("amb") == Condition::kAmb);
  CHECK_THROWS_AS(parse_condition("greedy"), ConfigError);
}

TEST_CASE("run config round-trips and validates") {
  RunConfig cfg = config(Condition::kFc, 700, 42);
  cfg.all_spaces_selectable = false;
  cfg.environment.joystick_radius = 0.125;
  cfg.archive.context_weight = 0.5;
  cfg.progress.use_stored_reward = true;
  cfg.progress.keep_explore_goals = true;
  auto back = RunConfig::from_config(KeyValueConfig::parse(cfg.to_config().to_string()));
  CHECK(back.to_config().to_string() == cfg.to_config().to_string());
  CHECK(back.condition == Condition::kFc);
  CHECK(back.iterations == 700);
  CHECK(back.seed == 42);
  CHECK_FALSE(back.all_spaces_selectable);
  CHECK(back.environment.joystick_radius == 0.125);
  CHECK(back.progress.use_stored_reward);
  CHECK(back.progress.keep_explore_goals);

  RunConfig bad = cfg;
  bad.iterations = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.random_fraction = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.sgs_space = 99;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_config(KeyValueConfig::parse("run.iteratons = 5\n")), ConfigError);
}

TEST_CASE("RANDOM never sets a goal") {
  auto recs = run(config(Condition::kRandom, 200));
  for (const auto& r : recs) {
    CHECK(r.kind == EpisodeKind::kRandom);
    CHECK_FALSE(r.space.has_value());
    CHECK(r.goal.empty());
    CHECK_FALSE(r.reward.has_value());
    for (double v : r.theta) CHECK(std::abs(v) <= 1.0);
  }
}

TEST_CASE("goal-directed conditions bootstrap with random parameters") {
  for (auto c : {Condition::kRmb, Condition::kSgs, Condition::kFc, Condition::kAmb}) {
    auto recs = run(config(c, 60));
    for (std::size_t i = 0; i < 30; ++i) CHECK(recs[i].kind == EpisodeKind::kBootstrap);
    for (std::size_t i = 30; i < 60; ++i) CHECK(recs[i].kind != EpisodeKind::kBootstrap);
  }
}

TEST_CASE("SGS always targets the ball space") {
  for (const auto& r : run(config(Condition::kSgs, 400)))
    if (r.space) CHECK(*r.space == 5);
}

TEST_CASE("FC follows the seven-phase schedule") {
  const std::size_t n = 700;
  auto cfg = config(Condition::kFc, n);
  Explorer e(cfg);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = e.run_episode();
    const int expected = static_cast<int>(7 * i / n) + 1;
    CHECK(e.curriculum_space(static_cast<std::int64_t>(i)) == expected);
    if (r.space) CHECK(*r.space == expected);
  }
}

TEST_CASE("RMB picks spaces uniformly among the selectable ones") {
  for (bool all : {true, false}) {
    auto cfg = config(Condition::kRmb, 2000, 3);
    cfg.all_spaces_selectable = all;
    const std::size_t m = all ? 15 : 7;
    std::map<int, int> counts;
    int total = 0;
    Explorer e(cfg);
    CHECK(e.selectable_spaces().size() == m);
    for (std::size_t i = 0; i < cfg.iterations; ++i) {
      auto r = e.run_episode();
      if (!r.space) continue;
      ++counts[*r.space];
      ++total;
    }
    CHECK(counts.size() == m);
    const double p = 1.0 / m;
    const double sigma = std::sqrt(total * p * (1 - p));
    for (auto [k, n] : counts) CHECK(std::abs(n - total * p) < 3.5 * sigma);
  }
}

TEST_CASE("random babbling and exploitation rates") {
  for (auto c : {Condition::kRmb, Condition::kSgs, Condition::kFc, Condition::kAmb}) {
    auto recs = run(config(c, 2000, 5));
    int babble = 0, directed = 0, exploit = 0;
    for (const auto& r : recs) {
      if (r.kind == EpisodeKind::kBootstrap) continue;
      if (r.random_babble) {
        ++babble;
        CHECK(r.kind == EpisodeKind::kBabble);
        CHECK_FALSE(r.space.has_value());
      } else {
        ++directed;
        exploit += r.kind == EpisodeKind::kExploit;
        if (r.kind == EpisodeKind::kExploit) CHECK(r.intrinsic.has_value());
        if (r.kind == EpisodeKind::kExplore) CHECK_FALSE(r.intrinsic.has_value());
      }
    }
    CHECK(babble / double(babble + directed) == doctest::Approx(0.10).epsilon(0.2));
    if (c == Condition::kAmb) CHECK(exploit / double(directed) == doctest::Approx(0.20).epsilon(0.15));
    else CHECK(exploit == 0);
  }
}

TEST_CASE("AMB logs bandit averages that match the tracker") {
  auto cfg = config(Condition::kAmb, 300, 7);
  Explorer e(cfg);
  EpisodeRecord last;
  for (std::size_t i = 0; i < cfg.iterations; ++i) last = e.run_episode();
  CHECK(last.averages == e.progress().averages());
  CHECK(last.averages.size() == 15);
}

TEST_CASE("progress history holds exploit goals only unless explore goals are kept") {
  for (bool keep : {false, true}) {
    auto cfg = config(Condition::kAmb, 400, 9);
    cfg.progress.keep_explore_goals = keep;
    Explorer e(cfg);
    std::map<int, std::size_t> exploit, directed;
    for (std::size_t i = 0; i < cfg.iterations; ++i) {
      const auto r = e.run_episode();
      if (!r.space) continue;
      ++directed[*r.space];
      exploit[*r.space] += r.kind == EpisodeKind::kExploit;
    }
    for (int id : e.environment().spaces().ids()) {
      CHECK(e.progress().history(id).size() == (keep ? directed[id] : exploit[id]));
      CHECK(e.progress().window(id).size() == std::min<std::size_t>(exploit[id], cfg.progress.window));
    }
  }
}

TEST_CASE("archive size equals episodes in every condition") {
  for (auto c : {Condition::kRandom, Condition::kRmb, Condition::kSgs, Condition::kFc, Condition::kAmb}) {
    auto cfg = config(c, 120);
    Explorer e(cfg);
    for (int i = 0; i < 120; ++i) {
      e.run_episode();
      REQUIRE(e.archive().size() == e.episodes());
    }
  }
}

TEST_CASE("same seed gives identical episodes; another seed does not") {
  for (auto c : {Condition::kRandom, Condition::kRmb, Condition::kSgs, Condition::kFc, Condition::kAmb}) {
    auto a = run(config(c, 150, 11));
    auto b = run(config(c, 150, 11));
    auto d = run(config(c, 150, 12));
    CHECK(a == b);
    CHECK_FALSE(a == d);
  }
}

TEST_CASE("explorer snapshot is frozen while exploration continues") {
  auto cfg = config(Condition::kRmb, 300);
  Explorer e(cfg);
  CHECK_THROWS_AS(e.target_policy_snapshot()->sample_meta_policy(Problem{1, Vector(30, 0.0)}, Context{{0, 0}}),
                  BootstrapRequired);
  for (int i = 0; i < 100; ++i) e.run_episode();
  auto snap = e.target_policy_snapshot();
  Rng rng(1);
  std::vector<Problem> goals;
  std::vector<PolicyParams> answers;
  for (int q = 0; q < 30; ++q) {
    goals.push_back(sample_goal(e.archive().spaces().at(1 + q % 7), rng));
    answers.push_back(snap->sample_meta_policy(goals.back(), Context{{0, 0}}));
    CHECK(answers.back() == e.archive().sample_meta_policy(goals.back(), Context{{0, 0}}));
  }
  for (int i = 0; i < 100; ++i) e.run_episode();
  CHECK(snap->size() == 100);
  for (int q = 0; q < 30; ++q) CHECK(snap->sample_meta_policy(goals[q], Context{{0, 0}}) == answers[q]);
}

TEST_CASE("evaluation thread on snapshots while the explorer runs") {
  auto cfg = config(Condition::kAmb, 600, 2);
  Explorer e(cfg);
  for (int i = 0; i < 50; ++i) e.run_episode();

  std::mutex m;
  auto current = e.target_policy_snapshot();
  std::atomic<bool> done{false};
  std::atomic<int> evaluations{0}, torn{0};
  std::thread evaluator([&] {
    Rng rng(3);
    while (!done.load()) {
      std::shared_ptr<const MetaPolicyArchive> snap;
      {
        std::lock_guard<std::mutex> lock(m);
        snap = current;
      }
      const std::size_t n = snap->size();
      auto g = sample_goal(snap->spaces().at(4), rng);
      auto first = snap->sample_meta_policy(g, Context{{0.1, -0.1}});
      auto second = snap->sample_meta_policy(g, Context{{0.1, -0.1}});
      if (!(first == second) || snap->size() != n) ++torn;
      ++evaluations;
    }
  });
  for (int i = 50; i < 600; ++i) {
    e.run_episode();
    if (i % 10 == 0) {
      auto s = e.target_policy_snapshot();
      std::lock_guard<std::mutex> lock(m);
      current = std::move(s);
    }
  }
  while (evaluations.load() < 50) std::this_thread::yield();
  done = true;
  evaluator.join();
  CHECK(torn.load() == 0);
}

TEST_CASE("run_experiment writes a complete, reproducible artifact") {
  auto cfg = config(Condition::kAmb, 120, 9);
  cfg.snapshot_every = 50;
  auto d1 = scratch_dir("a"), d2 = scratch_dir("b");
  auto s1 = run_experiment(cfg, d1);
  run_experiment(cfg, d2);
  CHECK(s1.episodes == 120);
  CHECK(s1.final_coverage.size() == 15);
  for (const char* f : {"config.cfg", "episodes.jsonl", "coverage.csv", "archive.jsonl"}) {
    CHECK(fs::exists(d1 / f));
    CHECK((slurp(d1 / f) == slurp(d2 / f)));
  }
  CHECK(fs::exists(d1 / "snapshots" / "archive_00000050.jsonl"));
  CHECK(fs::exists(d1 / "snapshots" / "archive_00000100.jsonl"));

  auto log = read_episode_log(d1 / "episodes.jsonl");
  REQUIRE(log.records.size() == 120);
  for (std::size_t i = 0; i < log.records.size(); ++i) CHECK(log.records[i].iteration == static_cast<std::int64_t>(i));

  // The persisted config alone reproduces the run.
  auto again = RunConfig::from_config(KeyValueConfig::load(d1 / "config.cfg"));
  auto d3 = scratch_dir("c");
  run_experiment(again, d3);
  CHECK((slurp(d3 / "episodes.jsonl") == slurp(d1 / "episodes.jsonl")));
  for (auto& d : {d1, d2, d3}) fs::remove_all(d);
}
