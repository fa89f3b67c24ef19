#include "imgep/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace imgep {

bool object_moved(const Environment& env, int id, const Context& c, std::span<const double> slice,
                  double threshold) {
  const auto rest = env.rest_slice(id, c);
  if (!rest) return false;
  if (rest->size() != slice.size()) throw std::invalid_argument("slice does not match space");
  for (std::size_t i = 0; i < slice.size(); ++i)
    if (std::abs(slice[i] - (*rest)[i]) > threshold) return true;
  return false;
}

std::size_t TransferMatrix::row(int space) const {
  const auto it = std::find(row_spaces.begin(), row_spaces.end(), space);
  if (it == row_spaces.end()) throw std::out_of_range("no transfer row for space " + std::to_string(space));
  return static_cast<std::size_t>(it - row_spaces.begin());
}

double TransferMatrix::at(int row_space, int object) const {
  const auto it = std::find(columns.begin(), columns.end(), object);
  if (it == columns.end()) throw std::out_of_range("no transfer column for object " + std::to_string(object));
  return proportion[row(row_space)][static_cast<std::size_t>(it - columns.begin())];
}

TransferMatrix transfer_stats(const std::vector<EpisodeRecord>& records, const Environment& env,
                              double threshold, std::vector<int> objects) {
  const auto& spaces = env.spaces();
  if (objects.empty())
    for (int id = space_id(ToolUseObject::kHand); id <= space_id(ToolUseObject::kSound); ++id) objects.push_back(id);

  TransferMatrix m;
  m.row_names.push_back("random");
  m.row_spaces.push_back(-1);
  for (const auto& s : spaces.spaces()) {
    m.row_names.push_back(s.name);
    m.row_spaces.push_back(s.id);
  }
  m.columns = objects;
  m.counts.assign(m.row_spaces.size(), 0);
  std::vector<std::vector<std::size_t>> hits(m.row_spaces.size(), std::vector<std::size_t>(objects.size(), 0));

  for (const auto& r : records) {
    const bool random_theta = r.kind == EpisodeKind::kRandom || r.kind == EpisodeKind::kBootstrap ||
                              r.kind == EpisodeKind::kBabble;
    if (!random_theta && !r.space) continue;
    const std::size_t row = m.row(random_theta ? -1 : *r.space);
    ++m.counts[row];
    const Context c{r.context};
    for (std::size_t j = 0; j < objects.size(); ++j)
      if (object_moved(env, objects[j], c, spaces.slice(r.outcome, objects[j]), threshold)) ++hits[row][j];
  }

  m.proportion.assign(m.row_spaces.size(), Vector(objects.size(), 0.0));
  for (std::size_t i = 0; i < m.row_spaces.size(); ++i)
    if (m.counts[i])
      for (std::size_t j = 0; j < objects.size(); ++j)
        m.proportion[i][j] = static_cast<double>(hits[i][j]) / static_cast<double>(m.counts[i]);
  return m;
}

std::vector<Vector> progress_curves(const std::vector<EpisodeRecord>& records) {
  std::vector<Vector> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.averages);
  return out;
}

std::vector<Vector> recompute_progress_curves(const std::vector<EpisodeRecord>& records,
                                              const std::vector<int>& space_ids, std::size_t window) {
  if (window == 0) throw std::invalid_argument("progress window must be positive");
  std::vector<std::deque<double>> recent(space_ids.size());
  Vector avg(space_ids.size(), 0.0);
  std::vector<Vector> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (r.intrinsic && r.space) {
      const auto it = std::find(space_ids.begin(), space_ids.end(), *r.space);
      if (it == space_ids.end()) throw std::invalid_argument("record refers to an unknown space");
      const auto k = static_cast<std::size_t>(it - space_ids.begin());
      recent[k].push_back(*r.intrinsic);
      if (recent[k].size() > window) recent[k].pop_front();
      avg[k] = std::accumulate(recent[k].begin(), recent[k].end(), 0.0) / static_cast<double>(recent[k].size());
    }
    out.push_back(avg);
  }
  return out;
}

}  // namespace imgep
