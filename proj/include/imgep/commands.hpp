#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace imgep {

enum ExitCode : int { kExitOk = 0, kExitConfigError = 1, kExitRuntimeError = 2 };

/// Name of the variable holding the default output root.
inline constexpr const char* kOutputRootVariable = "IMGEP_OUTPUT_ROOT";

/// $IMGEP_OUTPUT_ROOT when set and non-empty, "runs" otherwise.
std::filesystem::path default_output_root();

struct RunOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::string> condition;
  std::optional<long long> iterations;
  std::optional<long long> seed;
  std::optional<std::string> env;
  std::optional<std::filesystem::path> out;
  std::optional<long long> snapshot_every;
  /// Extra `key=value` overrides applied after the config file.
  std::vector<std::string> overrides;
};

struct EvalOptions {
  std::vector<std::filesystem::path> dirs;
  std::size_t test_samples = 200;
  /// A space id, a space name, or "all".
  std::string space = "all";
  long long seed = 0;
  std::optional<std::filesystem::path> table;
};

struct DemoOptions {
  std::filesystem::path out = "bandit_demo.csv";
  long long seed = 0;
  std::size_t steps = 4000;
};

/// Each command reports progress on `out`, errors on `err`, and returns an exit code.
int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);
int cmd_demo_bandit(const DemoOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace imgep
