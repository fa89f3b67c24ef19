#include "imgep/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "imgep/archive_io.hpp"
#include "imgep/coverage.hpp"
#include "imgep/engine.hpp"
#include "imgep/episode_log.hpp"
#include "imgep/loss.hpp"
#include "imgep/progress_demo.hpp"
#include "imgep/transfer.hpp"

namespace imgep {

namespace fs = std::filesystem;

fs::path default_output_root() {
  const char* root = std::getenv(kOutputRootVariable);
  return root && *root ? fs::path(root) : fs::path("runs");
}

namespace {

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

std::ofstream open_csv(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

// -- run ---------------------------------------------------------------------

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    KeyValueConfig kv = opts.config ? KeyValueConfig::load(*opts.config) : KeyValueConfig{};
    for (const auto& o : opts.overrides) {
      if (o.find('=') == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
      const KeyValueConfig one = KeyValueConfig::parse(o);
      for (const auto& [key, value] : one.entries()) kv.set(key, value);
    }
    if (opts.condition) kv.set("run.condition", *opts.condition);
    if (opts.iterations) kv.set("run.iterations", *opts.iterations);
    if (opts.seed) kv.set("run.seed", *opts.seed);
    if (opts.env) kv.set("run.env", *opts.env);
    if (opts.snapshot_every) kv.set("run.snapshot_every", *opts.snapshot_every);
    const RunConfig cfg = RunConfig::from_config(kv);

    const fs::path dir = opts.out ? *opts.out
                                  : default_output_root() / (to_string(cfg.condition) + "_seed" + std::to_string(cfg.seed));
    out << "running " << to_string(cfg.condition) << " for " << cfg.iterations << " episodes (seed " << cfg.seed
        << ") into " << dir.string() << '\n';
    const RunSummary s = run_experiment(cfg, dir);
    out << "done: " << s.episodes << " episodes\n";
    return kExitOk;
  });
}

// -- eval --------------------------------------------------------------------

namespace {

struct EvalRow {
  std::string dir;
  std::string condition;
  std::uint64_t seed = 0;
  std::size_t episodes = 0;
  Vector coverage;
  std::vector<std::pair<int, LossEstimate>> loss;
};

std::vector<int> resolve_spaces(const std::string& sel, const GoalSpaceRegistry& spaces) {
  if (sel == "all") return spaces.ids();
  if (const auto* s = spaces.find(std::string_view(sel))) return {s->id};
  try {
    std::size_t used = 0;
    const int id = std::stoi(sel, &used);
    if (used == sel.size() && spaces.contains(id)) return {id};
  } catch (const std::exception&) {
  }
  throw ConfigError("unknown goal space '" + sel + "'");
}

EvalRow evaluate_dir(const fs::path& dir, const EvalOptions& opts) {
  if (!fs::exists(dir / "config.cfg")) throw std::runtime_error(dir.string() + " has no config.cfg");
  const RunConfig cfg = RunConfig::from_config(KeyValueConfig::load(dir / "config.cfg"));
  const ToolUseEnv env(cfg.environment);
  const auto& spaces = env.spaces();
  const std::vector<int> selected = resolve_spaces(opts.space, spaces);

  if (!fs::exists(dir / "archive.jsonl")) throw std::runtime_error(dir.string() + " has no archive snapshot");
  const MetaPolicyArchive archive = load_archive(dir / "archive.jsonl", spaces, cfg.archive);
  if (archive.empty()) throw std::runtime_error(dir.string() + ": archive snapshot is empty, nothing to evaluate");
  const EpisodeLog log = read_episode_log(dir / "episodes.jsonl");

  const fs::path mdir = dir / "metrics";
  fs::create_directories(mdir);
  EvalRow row{dir.string(), to_string(cfg.condition), cfg.seed, log.records.size(), {}, {}};

  // Coverage, recomputed from the log alone.
  CoverageTracker cov(spaces);
  for (const auto& r : log.records) cov.update(Outcome{r.outcome});
  row.coverage = cov.percentages();
  {
    auto f = open_csv(mdir / "coverage.csv");
    f << "# schema=imgep-coverage-final version=1\nspace,name,cells,total_cells,percent\n";
    for (const auto& s : spaces.spaces()) {
      const auto& g = cov.grid(s.id);
      f << s.id << ',' << s.name << ',' << g.occupied() << ',' << g.total_cells() << ',' << fmt(g.percent()) << '\n';
    }
  }

  {
    const TransferMatrix m = transfer_stats(log.records, env);
    auto f = open_csv(mdir / "transfer.csv");
    f << "# schema=imgep-transfer version=1 threshold=" << fmt(kMovedThreshold) << "\ngoal_space,episodes";
    for (int c : m.columns) f << ',' << spaces.at(c).name;
    f << '\n';
    for (std::size_t i = 0; i < m.row_names.size(); ++i) {
      f << m.row_names[i] << ',' << m.counts[i];
      for (double v : m.proportion[i]) f << ',' << fmt(v);
      f << '\n';
    }
  }

  {
    auto f = open_csv(mdir / "progress.csv");
    f << "# schema=imgep-progress version=1\nepisode";
    for (const auto& s : spaces.spaces()) f << ',' << s.name;
    f << '\n';
    const auto curves = progress_curves(log.records);
    for (std::size_t i = 0; i < curves.size(); ++i) {
      f << log.records[i].iteration;
      if (curves[i].empty())
        for (std::size_t k = 0; k < spaces.size(); ++k) f << ",0";
      else
        for (double v : curves[i]) f << ',' << fmt(v);
      f << '\n';
    }
  }

  {
    auto f = open_csv(mdir / "loss.csv");
    f << "# schema=imgep-loss version=1\nspace,name,samples,loss,standard_error\n";
    for (int id : selected) {
      std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(id), 0x10550u};
      Rng rng(seq);
      const LossEstimate e = evaluate_loss(archive, env, TestDistribution{id, opts.test_samples}, rng);
      f << id << ',' << spaces.at(id).name << ',' << e.samples << ',' << fmt(e.mean) << ','
        << fmt(e.standard_error) << '\n';
      row.loss.emplace_back(id, e);
    }
  }
  return row;
}

}  // namespace

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.dirs.empty()) throw ConfigError("eval needs at least one artifact directory");
    if (opts.test_samples == 0) throw ConfigError("--test-samples must be positive");
    std::vector<EvalRow> rows;
    for (const auto& d : opts.dirs) rows.push_back(evaluate_dir(d, opts));

    const auto names = ToolUseEnv::object_names();
    std::ostringstream table;
    table << "dir,condition,seed,episodes";
    for (const char* n : names) table << ",coverage_" << n;
    for (const auto& [id, e] : rows.front().loss) table << ",loss_" << names.at(static_cast<std::size_t>(id - 1));
    table << '\n';
    for (const auto& r : rows) {
      table << r.dir << ',' << r.condition << ',' << r.seed << ',' << r.episodes;
      for (double v : r.coverage) table << ',' << fmt(v);
      for (const auto& [id, e] : r.loss) table << ',' << fmt(e.mean);
      table << '\n';
    }
    out << table.str();
    if (opts.table) {
      auto f = open_csv(*opts.table);
      f << table.str();
    }
    return kExitOk;
  });
}

// -- demo --------------------------------------------------------------------

int cmd_demo_bandit(const DemoOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.steps == 0) throw ConfigError("--steps must be positive");
    DemoConfig cfg;
    cfg.steps = opts.steps;
    cfg.seed = static_cast<std::uint64_t>(opts.seed);
    const auto curves = standard_demo_curves();
    const DemoTrace t = synthetic_progress_demo(curves, cfg);

    auto f = open_csv(opts.out);
    f << "# schema=imgep-bandit-demo version=1\nstep,choice,uniform_branch";
    for (const auto& n : t.names) f << ",freq_" << n;
    for (const auto& n : t.names) f << ",progress_" << n;
    f << '\n';
    for (std::size_t s = 0; s < t.choices.size(); ++s) {
      f << s << ',' << t.names[t.choices[s]] << ',' << (t.uniform_branch[s] ? 1 : 0);
      for (double v : t.frequencies[s]) f << ',' << fmt(v);
      for (double v : t.averages[s]) f << ',' << fmt(v);
      f << '\n';
    }
    out << "arm,peak_step,greedy_share_after_warmup\n";
    const std::size_t warmup = opts.steps / 4;
    for (std::size_t k = 0; k < t.names.size(); ++k)
      out << t.names[k] << ',' << t.peak_step(k) << ',' << fmt(t.greedy_share(k, warmup)) << '\n';
    out << "traces written to " << opts.out.string() << '\n';
    return kExitOk;
  });
}

}  // namespace imgep
