#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "imgep/archive_io.hpp"
#include "imgep/commands.hpp"
#include "imgep/engine.hpp"
#include "imgep/episode_log.hpp"

using namespace imgep;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("imgep_cli_" + name);
  fs::remove_all(d);
  return d;
}

int run(const std::string& condition, long long n, long long seed, const fs::path& out, std::string* err_text = nullptr) {
  RunOptions o;
  o.condition = condition;
  o.iterations = n;
  o.seed = seed;
  o.out = out;
  std::ostringstream so, se;
  const int code = cmd_run(o, so, se);
  if (err_text) *err_text = se.str();
  return code;
}

}  // namespace

TEST_CASE("run writes one record per episode") {
  const auto d = scratch("run100");
  REQUIRE(run("RMB", 100, 1, d) == kExitOk);
  auto log = read_episode_log(d / "episodes.jsonl");
  CHECK(log.records.size() == 100);
  for (std::size_t i = 0; i < log.records.size(); ++i) CHECK(log.records[i].iteration == static_cast<std::int64_t>(i));
  CHECK(fs::exists(d / "config.cfg"));
  CHECK(fs::exists(d / "archive.jsonl"));
  CHECK(fs::exists(d / "coverage.csv"));
  fs::remove_all(d);
}

TEST_CASE("same invocation twice gives identical logs") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  REQUIRE(run("AMB", 150, 3, a) == kExitOk);
  REQUIRE(run("AMB", 150, 3, b) == kExitOk);
  CHECK((slurp(a / "episodes.jsonl") == slurp(b / "episodes.jsonl")));
  CHECK((slurp(a / "archive.jsonl") == slurp(b / "archive.jsonl")));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("fixed curriculum follows the seven-phase schedule") {
  const auto d = scratch("fc");
  REQUIRE(run("FC", 7000, 2, d) == kExitOk);
  auto log = read_episode_log(d / "episodes.jsonl");
  REQUIRE(log.records.size() == 7000);
  std::size_t chosen = 0;
  for (const auto& r : log.records) {
    if (!r.space) continue;
    ++chosen;
    REQUIRE(*r.space == static_cast<int>(r.iteration / 1000) + 1);
  }
  CHECK(chosen > 6000);
  fs::remove_all(d);
}

TEST_CASE("flags override the config file") {
  const auto d = scratch("flags");
  fs::create_directories(d);
  {
    std::ofstream f(d / "base.cfg");
    f << "run.condition = RANDOM\nrun.iterations = 20\nrun.seed = 9\n";
  }
  RunOptions o;
  o.config = d / "base.cfg";
  o.iterations = 30;
  o.out = d / "out";
  o.overrides = {"agent.random_fraction=0.5"};
  std::ostringstream so, se;
  REQUIRE_MESSAGE(cmd_run(o, so, se) == kExitOk, se.str());
  auto kv = KeyValueConfig::load(d / "out" / "config.cfg");
  CHECK(kv.get_int("run.iterations", 0) == 30);
  CHECK(kv.get_int("run.seed", 0) == 9);
  CHECK(kv.get_double("agent.random_fraction", 0) == 0.5);
  CHECK(read_episode_log(d / "out" / "episodes.jsonl").records.size() == 30);
  fs::remove_all(d);
}

TEST_CASE("invalid configuration exits with code 1 and a message") {
  const auto d = scratch("bad");
  std::string err;
  CHECK(run("CURIOUS", 10, 1, d, &err) == kExitConfigError);
  CHECK(err.find("config error") != std::string::npos);
  CHECK(run("RMB", 0, 1, d, &err) == kExitConfigError);

  RunOptions o;
  o.config = d / "missing.cfg";
  std::ostringstream so, se;
  CHECK(cmd_run(o, so, se) == kExitConfigError);
  o.config.reset();
  o.overrides = {"no_equals_sign"};
  CHECK(cmd_run(o, so, se) == kExitConfigError);
}

TEST_CASE("eval on an empty archive fails clearly") {
  const auto d = scratch("empty");
  REQUIRE(run("RANDOM", 5, 1, d) == kExitOk);
  ToolUseEnv env;
  dump_archive(MetaPolicyArchive(env.spaces(), env.context_dim(), env.theta_dim()), d / "archive.jsonl");
  EvalOptions e;
  e.dirs = {d};
  e.test_samples = 5;
  std::ostringstream so, se;
  CHECK(cmd_eval(e, so, se) == kExitRuntimeError);
  CHECK(se.str().find("empty") != std::string::npos);

  fs::remove(d / "archive.jsonl");
  std::ostringstream so2, se2;
  CHECK(cmd_eval(e, so2, se2) == kExitRuntimeError);
  CHECK(se2.str().find("snapshot") != std::string::npos);
  fs::remove_all(d);
}

TEST_CASE("eval is reproducible and aggregates several runs") {
  const auto a = scratch("eval_a"), b = scratch("eval_b");
  REQUIRE(run("RANDOM", 120, 1, a) == kExitOk);
  REQUIRE(run("AMB", 120, 1, b) == kExitOk);
  EvalOptions e;
  e.dirs = {a, b};
  e.test_samples = 20;
  e.space = "ball";
  e.table = a / "table.csv";

  std::ostringstream o1, e1, o2, e2;
  REQUIRE(cmd_eval(e, o1, e1) == kExitOk);
  const std::string loss1 = slurp(b / "metrics" / "loss.csv");
  const std::string table1 = slurp(a / "table.csv");
  REQUIRE(cmd_eval(e, o2, e2) == kExitOk);
  CHECK(o1.str() == o2.str());
  CHECK((loss1 == slurp(b / "metrics" / "loss.csv")));
  CHECK((table1 == slurp(a / "table.csv")));
  for (const char* f : {"coverage.csv", "transfer.csv", "progress.csv", "loss.csv"}) CHECK(fs::exists(b / "metrics" / f));

  // Header plus one row per directory, condition in the second column.
  std::istringstream t(table1);
  std::string header, r1, r2, extra;
  std::getline(t, header);
  std::getline(t, r1);
  std::getline(t, r2);
  CHECK_FALSE(std::getline(t, extra));
  CHECK(header.find("loss_ball") != std::string::npos);
  CHECK(r1.find(",RANDOM,1,120,") != std::string::npos);
  CHECK(r2.find(",AMB,1,120,") != std::string::npos);

  e.space = "nonsense";
  std::ostringstream o3, e3;
  CHECK(cmd_eval(e, o3, e3) == kExitConfigError);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("demo-bandit writes deterministic traces") {
  const auto d = scratch("demo");
  fs::create_directories(d);
  DemoOptions o;
  o.steps = 1500;
  o.seed = 4;
  o.out = d / "a.csv";
  std::ostringstream s1, e1, s2, e2;
  REQUIRE(cmd_demo_bandit(o, s1, e1) == kExitOk);
  o.out = d / "b.csv";
  REQUIRE(cmd_demo_bandit(o, s2, e2) == kExitOk);
  CHECK((slurp(d / "a.csv") == slurp(d / "b.csv")));
  const std::string text = slurp(d / "a.csv");
  std::size_t lines = 0;
  for (char ch : text) lines += ch == '\n';
  CHECK(lines == 1500 + 2);
  o.steps = 0;
  std::ostringstream s3, e3;
  CHECK(cmd_demo_bandit(o, s3, e3) == kExitConfigError);
  fs::remove_all(d);
}

TEST_CASE("default output root honours the environment variable") {
  ::setenv(kOutputRootVariable, "/tmp/somewhere", 1);
  CHECK(default_output_root() == fs::path("/tmp/somewhere"));
  ::setenv(kOutputRootVariable, "", 1);
  CHECK(default_output_root() == fs::path("runs"));
  ::unsetenv(kOutputRootVariable);
}
