#pragma once

#include "imgep/core.hpp"

namespace imgep {

/// Occupancy grid over the physical variables of one goal space. Each time
/// sample of an outcome slice is binned separately; occupancy only grows.
class CoverageGrid {
 public:
  explicit CoverageGrid(const GoalSpaceSpec& space);

  /// Adds the samples of one outcome slice and returns the occupied percentage.
  /// Throws std::invalid_argument on a slice of the wrong size.
  double update(std::span<const double> slice);

  std::size_t occupied() const { return occupied_; }
  std::size_t total_cells() const { return cells_.size(); }
  double percent() const;
  int space_id() const { return id_; }

  /// Flat cell index of one sample (values clamped into [-1, 1]).
  std::size_t cell_of(std::span<const double> sample) const;

 private:
  int id_;
  CoverageSpec spec_;
  std::vector<char> cells_;
  std::size_t occupied_ = 0;
};

/// One grid per registered space.
class CoverageTracker {
 public:
  explicit CoverageTracker(const GoalSpaceRegistry& spaces);

  void update(const Outcome& o);
  /// Percentages in registry order.
  Vector percentages() const;
  const CoverageGrid& grid(int id) const;

 private:
  GoalSpaceRegistry spaces_;
  std::vector<CoverageGrid> grids_;
};

}  // namespace imgep
