#include "imgep/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace imgep {

CoverageGrid::CoverageGrid(const GoalSpaceSpec& space) : id_(space.id), spec_(space.coverage) {
  if (spec_.variables == 0 || spec_.samples == 0 || spec_.bins_per_axis == 0)
    throw std::invalid_argument("coverage of space " + space.name + " is not configured");
  if (spec_.variables * spec_.samples != space.dim)
    throw std::invalid_argument("coverage layout of space " + space.name + " does not match its dimension");
  std::size_t total = 1;
  for (std::size_t i = 0; i < spec_.variables; ++i) total *= spec_.bins_per_axis;
  cells_.assign(total, 0);
}

std::size_t CoverageGrid::cell_of(std::span<const double> sample) const {
  const auto bins = static_cast<double>(spec_.bins_per_axis);
  std::size_t cell = 0;
  for (double v : sample) {
    const double u = (std::clamp(v, -1.0, 1.0) + 1.0) * 0.5 * bins;
    const auto b = std::min(static_cast<std::size_t>(std::floor(u)), spec_.bins_per_axis - 1);
    cell = cell * spec_.bins_per_axis + b;
  }
  return cell;
}

double CoverageGrid::update(std::span<const double> slice) {
  if (slice.size() != spec_.variables * spec_.samples)
    throw std::invalid_argument("coverage update with a slice of the wrong size");
  for (std::size_t s = 0; s < spec_.samples; ++s) {
    const std::size_t c = cell_of(slice.subspan(s * spec_.variables, spec_.variables));
    if (!cells_[c]) {
      cells_[c] = 1;
      ++occupied_;
    }
  }
  return percent();
}

double CoverageGrid::percent() const {
  return 100.0 * static_cast<double>(occupied_) / static_cast<double>(cells_.size());
}

CoverageTracker::CoverageTracker(const GoalSpaceRegistry& spaces) : spaces_(spaces) {
  for (const auto& s : spaces_.spaces()) grids_.emplace_back(s);
}

void CoverageTracker::update(const Outcome& o) {
  for (std::size_t k = 0; k < grids_.size(); ++k)
    grids_[k].update(spaces_.slice(o, spaces_.spaces()[k].id));
}

Vector CoverageTracker::percentages() const {
  Vector out;
  for (const auto& g : grids_) out.push_back(g.percent());
  return out;
}

const CoverageGrid& CoverageTracker::grid(int id) const {
  for (const auto& g : grids_)
    if (g.space_id() == id) return g;
  throw std::out_of_range("unknown goal space " + std::to_string(id));
}

}  // namespace imgep
