#include "imgep/progress.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace imgep {

ProgressTracker::ProgressTracker(GoalSpaceRegistry spaces, std::size_t context_dim, ProgressConfig cfg)
    : spaces_(std::move(spaces)), context_dim_(context_dim), cfg_(cfg) {
  if (cfg_.window == 0) throw std::invalid_argument("progress window must be positive");
  for (const auto& s : spaces_.spaces())
    per_space_.emplace(s.id, PerSpace{{}, KdTree(s.dim + context_dim_), {}});
}

const ProgressTracker::PerSpace& ProgressTracker::slot(int id) const {
  const auto it = per_space_.find(id);
  if (it == per_space_.end()) throw std::out_of_range("unknown goal space " + std::to_string(id));
  return it->second;
}

ProgressTracker::PerSpace& ProgressTracker::slot(int id) {
  return const_cast<PerSpace&>(std::as_const(*this).slot(id));
}

namespace {

// Equally similar entries resolve to the most recent one: ids count down.
constexpr std::size_t kNewest = std::numeric_limits<std::size_t>::max();

Vector join(const Vector& g, const Context& c) {
  Vector q = g;
  q.insert(q.end(), c.values.begin(), c.values.end());
  return q;
}

}  // namespace

double ProgressTracker::intrinsic_reward(const Problem& g, const Context& c, const Outcome& outcome) const {
  const auto& spec = spaces_.at(g.space_id);
  if (g.target.size() != spec.dim) throw std::invalid_argument("goal dimension does not match space " + spec.name);
  if (c.size() != context_dim_) throw std::invalid_argument("context has wrong dimension");
  const PerSpace& s = slot(g.space_id);
  if (s.history.empty()) return 0.0;

  const auto m = s.index.nearest(join(g.target, c));
  const Entry& old = s.history[kNewest - m->id];
  const double now = modular_reward(spec, g.target, spaces_.slice(outcome, g.space_id));
  const double before = cfg_.use_stored_reward ? old.reward : modular_reward(spec, g.target, old.outcome);
  return now - before;
}

void ProgressTracker::append(const Problem& g, const Context& c, const Outcome& outcome,
                             std::int64_t iteration) {
  const auto& spec = spaces_.at(g.space_id);
  const auto slice = spaces_.slice(outcome, g.space_id);
  PerSpace& s = slot(g.space_id);
  s.index.insert(join(g.target, c), kNewest - s.history.size());
  s.history.push_back(Entry{g.target, c, Vector(slice.begin(), slice.end()),
                            modular_reward(spec, g.target, slice), iteration});
}

void ProgressTracker::observe(const Problem& g, const Context& c, const Outcome& outcome,
                              std::int64_t iteration) {
  if (g.target.size() != spaces_.at(g.space_id).dim) throw std::invalid_argument("goal dimension does not match space");
  if (c.size() != context_dim_) throw std::invalid_argument("context has wrong dimension");
  append(g, c, outcome, iteration);
}

double ProgressTracker::record(const Problem& g, const Context& c, const Outcome& outcome,
                               std::int64_t iteration) {
  const double ri = intrinsic_reward(g, c, outcome);
  append(g, c, outcome, iteration);
  PerSpace& s = slot(g.space_id);
  s.recent.push_back(ri);
  if (s.recent.size() > cfg_.window) s.recent.pop_front();
  return ri;
}

double ProgressTracker::average(int id) const {
  const PerSpace& s = slot(id);
  if (s.recent.empty()) return 0.0;
  return std::accumulate(s.recent.begin(), s.recent.end(), 0.0) / static_cast<double>(s.recent.size());
}

Vector ProgressTracker::averages() const {
  Vector out;
  out.reserve(spaces_.size());
  for (const auto& s : spaces_.spaces()) out.push_back(average(s.id));
  return out;
}

const std::vector<ProgressTracker::Entry>& ProgressTracker::history(int id) const { return slot(id).history; }
const std::deque<double>& ProgressTracker::window(int id) const { return slot(id).recent; }

}  // namespace imgep
