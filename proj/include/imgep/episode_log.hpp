#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "imgep/core.hpp"

namespace imgep {

inline constexpr const char* kEpisodeLogSchema = "imgep-episodes";
inline constexpr int kEpisodeLogVersion = 1;

/// How the parameters of an episode were chosen.
enum class EpisodeKind { kRandom, kBootstrap, kBabble, kExplore, kExploit };

std::string to_string(EpisodeKind k);
EpisodeKind parse_episode_kind(const std::string& s);

struct EpisodeRecord {
  std::int64_t iteration = 0;
  std::string condition;
  EpisodeKind kind = EpisodeKind::kRandom;
  /// True for the per-episode random-parameter draw of goal-directed conditions.
  bool random_babble = false;
  std::optional<int> space;
  Vector goal;
  Vector theta;
  Vector context;
  Vector outcome;
  std::optional<double> reward;
  std::optional<double> intrinsic;
  /// Running progress averages in registry order (empty outside active babbling).
  Vector averages;

  bool operator==(const EpisodeRecord&) const = default;
};

std::string to_json_line(const EpisodeRecord& r);
/// Throws std::runtime_error on malformed input.
EpisodeRecord parse_json_line(const std::string& line);

struct EpisodeLogHeader {
  std::string schema = kEpisodeLogSchema;
  int version = kEpisodeLogVersion;
  std::vector<int> space_ids;
};

/// Appends records to a line-delimited log, flushing after every line so an
/// interrupted run keeps everything written so far.
class EpisodeLogWriter {
 public:
  EpisodeLogWriter(const std::filesystem::path& path, const EpisodeLogHeader& header);
  void write(const EpisodeRecord& r);

 private:
  std::ofstream out_;
  std::int64_t last_ = -1;
};

struct EpisodeLog {
  EpisodeLogHeader header;
  std::vector<EpisodeRecord> records;
};

/// Reads a whole log. Throws std::runtime_error when the file is missing, the
/// schema or version differs, or records are out of order.
EpisodeLog read_episode_log(const std::filesystem::path& path);

}  // namespace imgep
