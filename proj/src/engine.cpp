#include "imgep/engine.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "imgep/archive_io.hpp"

namespace imgep {

namespace {

constexpr std::array<const char*, 5> kConditionNames{"RANDOM", "RMB", "SGS", "FC", "AMB"};

Rng make_stream(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  return Rng(seq);
}

bool goal_directed(Condition c) { return c != Condition::kRandom; }

}  // namespace

std::string to_string(Condition c) { return kConditionNames.at(static_cast<std::size_t>(c)); }

Condition parse_condition(const std::string& s) {
  std::string up = s;
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char ch) { return std::toupper(ch); });
  for (std::size_t i = 0; i < kConditionNames.size(); ++i)
    if (up == kConditionNames[i]) return static_cast<Condition>(i);
  throw ConfigError("unknown condition '" + s + "' (expected RANDOM, RMB, SGS, FC or AMB)");
}

// -- config ------------------------------------------------------------------

void RunConfig::validate() const {
  if (iterations == 0) throw ConfigError("iterations must be positive");
  if (env != "tool_use") throw ConfigError("unknown environment '" + env + "' (available: tool_use)");
  if (coverage_every == 0) throw ConfigError("coverage cadence must be positive");
  if (random_fraction < 0.0 || random_fraction > 1.0) throw ConfigError("random fraction must be in [0, 1]");
  if (exploit_fraction < 0.0 || exploit_fraction > 1.0) throw ConfigError("exploit fraction must be in [0, 1]");
  if (bandit.random_fraction < 0.0 || bandit.random_fraction > 1.0)
    throw ConfigError("bandit random fraction must be in [0, 1]");
  if (progress.window == 0) throw ConfigError("progress window must be positive");
  if (archive.exploration_variance < 0.0) throw ConfigError("exploration variance must be non-negative");
  if (archive.context_weight < 0.0) throw ConfigError("context weight must be non-negative");
  if (archive.rebuild_every == 0) throw ConfigError("index rebuild cadence must be positive");
  environment.validate();
  const auto registry = ToolUseEnv::make_registry(environment.samples_per_object);
  if (!registry.contains(sgs_space)) throw ConfigError("single-goal space " + std::to_string(sgs_space) + " does not exist");
  if (fc_schedule.empty()) throw ConfigError("curriculum schedule is empty");
  for (int id : fc_schedule)
    if (!registry.contains(id)) throw ConfigError("curriculum space " + std::to_string(id) + " does not exist");
}

RunConfig RunConfig::from_config(const KeyValueConfig& kv) {
  RunConfig c;
  c.condition = parse_condition(kv.get_string("run.condition", to_string(c.condition)));
  const long long iterations = kv.get_int("run.iterations", static_cast<long long>(c.iterations));
  if (iterations <= 0) throw ConfigError("run.iterations must be positive");
  c.iterations = static_cast<std::size_t>(iterations);
  const long long seed = kv.get_int("run.seed", 0);
  if (seed < 0) throw ConfigError("run.seed must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.env = kv.get_string("run.env", c.env);
  const long long snap = kv.get_int("run.snapshot_every", 0);
  const long long cov = kv.get_int("run.coverage_every", static_cast<long long>(c.coverage_every));
  if (snap < 0 || cov <= 0) throw ConfigError("run cadences must be positive");
  c.snapshot_every = static_cast<std::size_t>(snap);
  c.coverage_every = static_cast<std::size_t>(cov);

  c.random_fraction = kv.get_double("agent.random_fraction", c.random_fraction);
  const long long boot = kv.get_int("agent.bootstrap", static_cast<long long>(c.bootstrap));
  if (boot < 0) throw ConfigError("agent.bootstrap must be non-negative");
  c.bootstrap = static_cast<std::size_t>(boot);
  c.exploit_fraction = kv.get_double("agent.exploit_fraction", c.exploit_fraction);
  const std::string sel = kv.get_string("agent.selectable", "all");
  if (sel != "all" && sel != "curriculum") throw ConfigError("agent.selectable must be 'all' or 'curriculum'");
  c.all_spaces_selectable = sel == "all";
  c.sgs_space = static_cast<int>(kv.get_int("agent.sgs_space", c.sgs_space));
  std::vector<double> fc(c.fc_schedule.begin(), c.fc_schedule.end());
  fc = kv.get_doubles("agent.fc_schedule", fc);
  c.fc_schedule.clear();
  for (double v : fc) {
    if (v != std::floor(v)) throw ConfigError("agent.fc_schedule must list integer space ids");
    c.fc_schedule.push_back(static_cast<int>(v));
  }
  c.bandit.random_fraction = kv.get_double("agent.bandit_random_fraction", c.bandit.random_fraction);
  const long long window = kv.get_int("agent.progress_window", static_cast<long long>(c.progress.window));
  if (window <= 0) throw ConfigError("agent.progress_window must be positive");
  c.progress.window = static_cast<std::size_t>(window);
  c.progress.use_stored_reward = kv.get_bool("agent.progress_stored_reward", c.progress.use_stored_reward);
  c.progress.keep_explore_goals = kv.get_bool("agent.progress_explore_history", c.progress.keep_explore_goals);

  c.archive.context_weight = kv.get_double("archive.context_weight", c.archive.context_weight);
  c.archive.exploration_variance = kv.get_double("archive.exploration_variance", c.archive.exploration_variance);
  const long long rebuild = kv.get_int("archive.rebuild_every", static_cast<long long>(c.archive.rebuild_every));
  if (rebuild <= 0) throw ConfigError("archive.rebuild_every must be positive");
  c.archive.rebuild_every = static_cast<std::size_t>(rebuild);

  c.environment = ToolUseConfig::from_config(kv);
  kv.require_all_consumed();
  c.validate();
  return c;
}

KeyValueConfig RunConfig::to_config() const {
  KeyValueConfig kv;
  kv.set("run.condition", to_string(condition));
  kv.set("run.iterations", static_cast<long long>(iterations));
  kv.set("run.seed", static_cast<long long>(seed));
  kv.set("run.env", env);
  kv.set("run.snapshot_every", static_cast<long long>(snapshot_every));
  kv.set("run.coverage_every", static_cast<long long>(coverage_every));
  kv.set("agent.random_fraction", random_fraction);
  kv.set("agent.bootstrap", static_cast<long long>(bootstrap));
  kv.set("agent.exploit_fraction", exploit_fraction);
  kv.set("agent.selectable", std::string(all_spaces_selectable ? "all" : "curriculum"));
  kv.set("agent.sgs_space", static_cast<long long>(sgs_space));
  kv.set("agent.fc_schedule", std::vector<double>(fc_schedule.begin(), fc_schedule.end()));
  kv.set("agent.bandit_random_fraction", bandit.random_fraction);
  kv.set("agent.progress_window", static_cast<long long>(progress.window));
  kv.set("agent.progress_stored_reward", progress.use_stored_reward);
  kv.set("agent.progress_explore_history", progress.keep_explore_goals);
  kv.set("archive.context_weight", archive.context_weight);
  kv.set("archive.exploration_variance", archive.exploration_variance);
  kv.set("archive.rebuild_every", static_cast<long long>(archive.rebuild_every));
  environment.write_to(kv);
  return kv;
}

// -- explorer ----------------------------------------------------------------

Explorer::Explorer(RunConfig cfg)
    : cfg_((cfg.validate(), std::move(cfg))),
      env_(cfg_.environment),
      archive_(env_.spaces(), env_.context_dim(), env_.theta_dim(), cfg_.archive),
      progress_(env_.spaces(), env_.context_dim(), cfg_.progress),
      agent_rng_(make_stream(cfg_.seed, 1)),
      env_rng_(make_stream(cfg_.seed, 2)) {
  if (cfg_.all_spaces_selectable) {
    selectable_ = env_.spaces().ids();
  } else {
    for (int id = space_id(ToolUseObject::kHand); id <= space_id(ToolUseObject::kSound); ++id)
      selectable_.push_back(id);
  }
}

int Explorer::curriculum_space(std::int64_t i) const {
  const auto n = static_cast<std::int64_t>(cfg_.iterations);
  const auto phases = static_cast<std::int64_t>(cfg_.fc_schedule.size());
  const auto phase = std::clamp<std::int64_t>(i * phases / n, 0, phases - 1);
  return cfg_.fc_schedule[static_cast<std::size_t>(phase)];
}

PolicyParams Explorer::random_theta() {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PolicyParams theta{Vector(env_.theta_dim())};
  for (double& v : theta.values) v = u(agent_rng_);
  return theta;
}

Vector Explorer::progress_of_selectable() const {
  Vector out;
  out.reserve(selectable_.size());
  for (int id : selectable_) out.push_back(progress_.average(id));
  return out;
}

EpisodeRecord Explorer::run_episode() {
  const std::int64_t i = episode_;
  EpisodeRecord rec;
  rec.iteration = i;
  rec.condition = to_string(cfg_.condition);

  const Context c = env_.sample_context();
  rec.context = c.values;

  std::optional<Problem> goal;
  PolicyParams theta;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  if (!goal_directed(cfg_.condition)) {
    rec.kind = EpisodeKind::kRandom;
    theta = random_theta();
  } else if (static_cast<std::size_t>(i) < cfg_.bootstrap || archive_.empty()) {
    rec.kind = EpisodeKind::kBootstrap;
    theta = random_theta();
  } else if (unit(agent_rng_) < cfg_.random_fraction) {
    rec.kind = EpisodeKind::kBabble;
    rec.random_babble = true;
    theta = random_theta();
  } else {
    int k = 0;
    switch (cfg_.condition) {
      case Condition::kSgs:
        k = cfg_.sgs_space;
        break;
      case Condition::kFc:
        k = curriculum_space(i);
        break;
      case Condition::kRmb: {
        std::uniform_int_distribution<std::size_t> pick(0, selectable_.size() - 1);
        k = selectable_[pick(agent_rng_)];
        break;
      }
      case Condition::kAmb:
        k = selectable_[bandit_select(progress_of_selectable(), agent_rng_, cfg_.bandit).arm];
        break;
      case Condition::kRandom:
        break;
    }
    goal = sample_goal(env_.spaces().at(k), agent_rng_);
    const bool exploit = cfg_.condition == Condition::kAmb && unit(agent_rng_) < cfg_.exploit_fraction;
    if (exploit) {
      rec.kind = EpisodeKind::kExploit;
      theta = archive_.sample_meta_policy(*goal, c);
    } else {
      rec.kind = EpisodeKind::kExplore;
      theta = archive_.sample_exploration_meta_policy(*goal, c, agent_rng_);
    }
    rec.space = k;
    rec.goal = goal->target;
  }

  RolloutResult r = env_.rollout(theta, env_rng_);
  if (goal) {
    rec.reward = modular_reward(*goal, r.outcome, env_.spaces());
    if (rec.kind == EpisodeKind::kExploit)
      rec.intrinsic = progress_.record(*goal, c, r.outcome, i);
    else if (cfg_.condition == Condition::kAmb && cfg_.progress.keep_explore_goals)
      progress_.observe(*goal, c, r.outcome, i);
  }
  if (cfg_.condition == Condition::kAmb) rec.averages = progress_.averages();

  rec.theta = theta.values;
  rec.outcome = r.outcome.full;
  archive_.add(Experiment{c, std::move(theta), std::move(r.outcome), std::move(r.trajectory), i});
  ++episode_;
  return rec;
}

// -- artifacts ---------------------------------------------------------------

namespace {

void write_coverage_row(std::ofstream& out, std::int64_t episodes, const Vector& pct) {
  out << episodes;
  for (double v : pct) out << ',' << format_double(v);
  out << '\n' << std::flush;
}

}  // namespace

RunSummary run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  cfg.validate();
  fs::create_directories(out_dir);
  cfg.to_config().save(out_dir / "config.cfg");

  Explorer explorer(cfg);
  const auto& spaces = explorer.archive().spaces();
  EpisodeLogWriter log(out_dir / "episodes.jsonl", EpisodeLogHeader{kEpisodeLogSchema, kEpisodeLogVersion, spaces.ids()});

  std::ofstream cov(out_dir / "coverage.csv");
  if (!cov) throw std::runtime_error("cannot write " + (out_dir / "coverage.csv").string());
  cov << "# schema=imgep-coverage version=1 unit=percent\nepisode";
  for (const auto& s : spaces.spaces()) cov << ',' << s.name;
  cov << '\n';

  if (cfg.snapshot_every > 0) fs::create_directories(out_dir / "snapshots");

  CoverageTracker coverage(spaces);
  for (std::size_t n = 1; n <= cfg.iterations; ++n) {
    const EpisodeRecord rec = explorer.run_episode();
    log.write(rec);
    coverage.update(Outcome{rec.outcome});
    if (n % cfg.coverage_every == 0 || n == cfg.iterations)
      write_coverage_row(cov, static_cast<std::int64_t>(n), coverage.percentages());
    if (cfg.snapshot_every > 0 && n % cfg.snapshot_every == 0) {
      char name[64];
      std::snprintf(name, sizeof name, "archive_%08zu.jsonl", n);
      dump_archive(*explorer.target_policy_snapshot(), out_dir / "snapshots" / name);
    }
  }
  dump_archive(explorer.archive(), out_dir / "archive.jsonl");
  return RunSummary{out_dir, cfg.iterations, coverage.percentages()};
}

}  // namespace imgep
