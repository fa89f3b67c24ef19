#include "imgep/episode_log.hpp"

#include <array>
#include <json.hpp>
#include <stdexcept>

namespace imgep {

namespace {

constexpr std::array<const char*, 5> kKindNames{"random", "bootstrap", "babble", "explore", "exploit"};

using nlohmann::json;

json optional_value(const auto& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string to_string(EpisodeKind k) { return kKindNames.at(static_cast<std::size_t>(k)); }

EpisodeKind parse_episode_kind(const std::string& s) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (s == kKindNames[i]) return static_cast<EpisodeKind>(i);
  throw std::runtime_error("unknown episode kind '" + s + "'");
}

std::string to_json_line(const EpisodeRecord& r) {
  json j;
  j["iteration"] = r.iteration;
  j["condition"] = r.condition;
  j["kind"] = to_string(r.kind);
  j["random_babble"] = r.random_babble;
  j["space"] = optional_value(r.space);
  j["goal"] = r.goal;
  j["theta"] = r.theta;
  j["context"] = r.context;
  j["outcome"] = r.outcome;
  j["reward"] = optional_value(r.reward);
  j["intrinsic"] = optional_value(r.intrinsic);
  j["averages"] = r.averages;
  return j.dump();
}

EpisodeRecord parse_json_line(const std::string& line) {
  try {
    const json j = json::parse(line);
    EpisodeRecord r;
    r.iteration = j.at("iteration").get<std::int64_t>();
    r.condition = j.at("condition").get<std::string>();
    r.kind = parse_episode_kind(j.at("kind").get<std::string>());
    r.random_babble = j.at("random_babble").get<bool>();
    if (!j.at("space").is_null()) r.space = j["space"].get<int>();
    r.goal = j.at("goal").get<Vector>();
    r.theta = j.at("theta").get<Vector>();
    r.context = j.at("context").get<Vector>();
    r.outcome = j.at("outcome").get<Vector>();
    if (!j.at("reward").is_null()) r.reward = j["reward"].get<double>();
    if (!j.at("intrinsic").is_null()) r.intrinsic = j["intrinsic"].get<double>();
    r.averages = j.at("averages").get<Vector>();
    return r;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed episode record: ") + e.what());
  }
}

EpisodeLogWriter::EpisodeLogWriter(const std::filesystem::path& path, const EpisodeLogHeader& header)
    : out_(path) {
  if (!out_) throw std::runtime_error("cannot open episode log " + path.string());
  json h;
  h["schema"] = header.schema;
  h["version"] = header.version;
  h["spaces"] = header.space_ids;
  out_ << h.dump() << '\n' << std::flush;
}

void EpisodeLogWriter::write(const EpisodeRecord& r) {
  if (r.iteration <= last_) throw std::logic_error("episode records must be strictly ordered");
  last_ = r.iteration;
  out_ << to_json_line(r) << '\n' << std::flush;
  if (!out_) throw std::runtime_error("write to episode log failed");
}

EpisodeLog read_episode_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open episode log " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("episode log " + path.string() + " is empty");

  EpisodeLog log;
  try {
    const json h = json::parse(line);
    log.header.schema = h.at("schema").get<std::string>();
    log.header.version = h.at("version").get<int>();
    log.header.space_ids = h.at("spaces").get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed episode log header: " + std::string(e.what()));
  }
  if (log.header.schema != kEpisodeLogSchema)
    throw std::runtime_error("unexpected log schema '" + log.header.schema + "'");
  if (log.header.version != kEpisodeLogVersion)
    throw std::runtime_error("episode log version " + std::to_string(log.header.version) +
                             " is not supported (expected " + std::to_string(kEpisodeLogVersion) + ")");

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    EpisodeRecord r = parse_json_line(line);
    if (!log.records.empty() && r.iteration <= log.records.back().iteration)
      throw std::runtime_error("episode records out of order at iteration " + std::to_string(r.iteration));
    log.records.push_back(std::move(r));
  }
  return log;
}

}  // namespace imgep
