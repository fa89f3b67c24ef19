#pragma once

#include <string>

#include "imgep/episode_log.hpp"
#include "imgep/tool_use_env.hpp"

namespace imgep {

/// Threshold on the largest absolute deviation from the rest slice.
inline constexpr double kMovedThreshold = 0.02;

/// Whether the object of space `id` left its rest configuration during an episode
/// that started in context c. Objects without a rest slice count as never moved.
bool object_moved(const Environment& env, int id, const Context& c, std::span<const double> slice,
                  double threshold = kMovedThreshold);

/// Rows: the random-parameter bucket (row 0, space -1) followed by every goal
/// space of the registry. Columns: the requested objects.
struct TransferMatrix {
  std::vector<std::string> row_names;
  std::vector<int> row_spaces;
  std::vector<int> columns;
  std::vector<std::size_t> counts;             // episodes per row
  std::vector<std::vector<double>> proportion;  // [row][column], 0 for empty rows

  /// Row index of a goal space, or of the random bucket for -1.
  std::size_t row(int space) const;
  double at(int row_space, int object) const;
};

/// Proportion of episodes of each goal space (and of random-parameter episodes)
/// in which each object moved. Objects default to the seven controllable ones.
TransferMatrix transfer_stats(const std::vector<EpisodeRecord>& records, const Environment& env,
                              double threshold = kMovedThreshold, std::vector<int> objects = {});

/// Per-episode running progress averages as logged (one row per record, registry order).
std::vector<Vector> progress_curves(const std::vector<EpisodeRecord>& records);

/// Same series rebuilt from the per-episode intrinsic rewards with a window of w.
std::vector<Vector> recompute_progress_curves(const std::vector<EpisodeRecord>& records,
                                              const std::vector<int>& space_ids, std::size_t window);

}  // namespace imgep
