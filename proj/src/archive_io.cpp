#include "imgep/archive_io.hpp"

#include <fstream>
#include <json.hpp>

namespace imgep {

using nlohmann::json;

void dump_archive(const MetaPolicyArchive& archive, std::ostream& out) {
  json header = {{"format", "imgep-archive"},
                 {"version", kArchiveFormatVersion},
                 {"context_dim", archive.context_dim()},
                 {"theta_dim", archive.theta_dim()},
                 {"outcome_dim", archive.spaces().total_dim()},
                 {"count", archive.size()}};
  out << header.dump() << '\n';
  for (const auto& e : archive.experiments()) {
    json rec = {{"iteration", e.iteration},
                {"context", e.context.values},
                {"theta", e.theta.values},
                {"outcome", e.outcome.full}};
    out << rec.dump() << '\n';
  }
}

void dump_archive(const MetaPolicyArchive& archive, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write archive " + path.string());
  dump_archive(archive, out);
  if (!out) throw std::runtime_error("failed writing archive " + path.string());
}

MetaPolicyArchive load_archive(std::istream& in, const GoalSpaceRegistry& spaces, ArchiveConfig cfg) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("archive file is empty");
  const json header = json::parse(line);
  if (header.value("format", "") != "imgep-archive")
    throw std::runtime_error("not an archive file");
  if (header.value("version", -1) != kArchiveFormatVersion)
    throw std::runtime_error("unsupported archive version " + header.value("version", json(-1)).dump());
  if (header.at("outcome_dim").get<std::size_t>() != spaces.total_dim())
    throw std::runtime_error("archive outcome dimension does not match the goal spaces");

  MetaPolicyArchive archive(spaces, header.at("context_dim").get<std::size_t>(),
                            header.at("theta_dim").get<std::size_t>(), cfg);
  const auto count = header.at("count").get<std::size_t>();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json rec = json::parse(line);
    Experiment e;
    e.iteration = rec.at("iteration").get<std::int64_t>();
    e.context.values = rec.at("context").get<Vector>();
    e.theta.values = rec.at("theta").get<Vector>();
    e.outcome.full = rec.at("outcome").get<Vector>();
    archive.add(std::move(e));
  }
  if (archive.size() != count)
    throw std::runtime_error("archive truncated: expected " + std::to_string(count) + " records, read " +
                             std::to_string(archive.size()));
  return archive;
}

MetaPolicyArchive load_archive(const std::filesystem::path& path, const GoalSpaceRegistry& spaces,
                               ArchiveConfig cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open archive " + path.string());
  return load_archive(in, spaces, cfg);
}

}  // namespace imgep
