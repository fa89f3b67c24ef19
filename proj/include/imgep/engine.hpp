#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "imgep/archive.hpp"
#include "imgep/bandit.hpp"
#include "imgep/config_file.hpp"
#include "imgep/coverage.hpp"
#include "imgep/episode_log.hpp"
#include "imgep/progress.hpp"
#include "imgep/tool_use_env.hpp"

namespace imgep {

enum class Condition { kRandom, kRmb, kSgs, kFc, kAmb };

std::string to_string(Condition c);
/// Case-insensitive; throws ConfigError on unknown names.
Condition parse_condition(const std::string& s);

struct RunConfig {
  Condition condition = Condition::kAmb;
  std::size_t iterations = 5000;
  std::uint64_t seed = 0;
  std::string env = "tool_use";
  /// Archive snapshot cadence in episodes; 0 keeps only the final archive.
  std::size_t snapshot_every = 0;
  std::size_t coverage_every = 50;

  /// Share of goal-directed-condition episodes that use random parameters.
  double random_fraction = 0.10;
  /// Leading random-parameter episodes of goal-directed conditions.
  std::size_t bootstrap = 30;
  /// Share of active-babbling episodes run without exploration noise.
  double exploit_fraction = 0.20;
  /// All registered spaces are goal candidates; otherwise the 7 controllable ones.
  bool all_spaces_selectable = true;
  int sgs_space = 5;
  std::vector<int> fc_schedule{1, 2, 3, 4, 5, 6, 7};

  BanditConfig bandit;
  ProgressConfig progress;
  ArchiveConfig archive;
  ToolUseConfig environment;

  /// Throws ConfigError.
  void validate() const;

  /// Reads `run.*`, `agent.*`, `archive.*`, `env.*` and `dmp.*` keys; unknown keys are errors.
  static RunConfig from_config(const KeyValueConfig& kv);
  KeyValueConfig to_config() const;
};

/// Sequential, seed-deterministic exploration loop for one condition. The agent
/// and the environment draw from separate random streams.
class Explorer {
 public:
  explicit Explorer(RunConfig cfg);

  /// Runs the next episode and returns its record.
  EpisodeRecord run_episode();

  std::int64_t episodes() const { return episode_; }
  const RunConfig& config() const { return cfg_; }
  const MetaPolicyArchive& archive() const { return archive_; }
  const ProgressTracker& progress() const { return progress_; }
  ToolUseEnv& environment() { return env_; }
  const std::vector<int>& selectable_spaces() const { return selectable_; }

  /// Immutable copy of the current meta-policy. Throws BootstrapRequired when empty.
  std::shared_ptr<const MetaPolicyArchive> target_policy_snapshot() const { return archive_.snapshot(); }

  /// Space chosen by the fixed curriculum at episode i.
  int curriculum_space(std::int64_t i) const;

 private:
  PolicyParams random_theta();
  Vector progress_of_selectable() const;

  RunConfig cfg_;
  ToolUseEnv env_;
  MetaPolicyArchive archive_;
  ProgressTracker progress_;
  std::vector<int> selectable_;
  Rng agent_rng_;
  Rng env_rng_;
  std::int64_t episode_ = 0;
};

struct RunSummary {
  std::filesystem::path directory;
  std::size_t episodes = 0;
  Vector final_coverage;  // registry order
};

/// Executes cfg.iterations episodes and writes the artifact directory:
///   config.cfg, episodes.jsonl, coverage.csv, archive.jsonl, snapshots/.
RunSummary run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace imgep
