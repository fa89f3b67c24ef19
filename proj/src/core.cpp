#include "imgep/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace imgep {

void PolicyParams::clip() {
  for (double& v : values) v = std::clamp(v, -1.0, 1.0);
}

GoalSpaceSpec make_box_space(int id, std::string name, std::size_t offset,
                             std::size_t variables, std::size_t samples,
                             std::size_t bins_per_axis) {
  GoalSpaceSpec s;
  s.id = id;
  s.name = std::move(name);
  s.dim = variables * samples;
  s.offset = offset;
  s.max_distance = 2.0 * std::sqrt(static_cast<double>(s.dim));
  s.coverage = {variables, samples, bins_per_axis};
  return s;
}

GoalSpaceRegistry::GoalSpaceRegistry(std::vector<GoalSpaceSpec> specs) : specs_(std::move(specs)) {
  std::set<int> seen;
  std::set<std::string> names;
  std::size_t expected = 0;
  for (const auto& s : specs_) {
    if (!seen.insert(s.id).second)
      throw std::invalid_argument("duplicate goal space id " + std::to_string(s.id));
    if (!names.insert(s.name).second)
      throw std::invalid_argument("duplicate goal space name " + s.name);
    if (s.dim == 0) throw std::invalid_argument("goal space " + s.name + " has zero dimension");
    if (!(s.max_distance > 0.0))
      throw std::invalid_argument("goal space " + s.name + " needs a positive max distance");
    if (s.offset != expected)
      throw std::invalid_argument("goal space " + s.name + " does not start where the previous ends");
    if (s.coverage.variables * s.coverage.samples != 0 &&
        s.coverage.variables * s.coverage.samples != s.dim)
      throw std::invalid_argument("coverage layout of " + s.name + " does not match its dimension");
    expected += s.dim;
  }
  total_dim_ = expected;
}

const GoalSpaceSpec* GoalSpaceRegistry::find(int id) const {
  auto it = std::find_if(specs_.begin(), specs_.end(), [id](const auto& s) { return s.id == id; });
  return it == specs_.end() ? nullptr : &*it;
}

const GoalSpaceSpec* GoalSpaceRegistry::find(std::string_view name) const {
  auto it = std::find_if(specs_.begin(), specs_.end(),
                         [name](const auto& s) { return s.name == name; });
  return it == specs_.end() ? nullptr : &*it;
}

const GoalSpaceSpec& GoalSpaceRegistry::at(int id) const {
  if (const auto* s = find(id)) return *s;
  throw std::out_of_range("unknown goal space id " + std::to_string(id));
}

std::vector<int> GoalSpaceRegistry::ids() const {
  std::vector<int> out;
  out.reserve(specs_.size());
  for (const auto& s : specs_) out.push_back(s.id);
  return out;
}

std::span<const double> GoalSpaceRegistry::slice(std::span<const double> full, int id) const {
  if (full.size() != total_dim_)
    throw std::invalid_argument("outcome has dimension " + std::to_string(full.size()) +
                                ", registry expects " + std::to_string(total_dim_));
  const auto& s = at(id);
  return full.subspan(s.offset, s.dim);
}

std::span<const double> GoalSpaceRegistry::slice(const Outcome& o, int id) const {
  return slice(std::span<const double>(o.full), id);
}

std::vector<Vector> GoalSpaceRegistry::split(const Outcome& o) const {
  std::vector<Vector> parts;
  parts.reserve(specs_.size());
  for (const auto& s : specs_) {
    auto sl = slice(o, s.id);
    parts.emplace_back(sl.begin(), sl.end());
  }
  return parts;
}

Outcome GoalSpaceRegistry::concatenate(const std::vector<Vector>& parts) const {
  if (parts.size() != specs_.size())
    throw std::invalid_argument("expected one part per goal space");
  Outcome o;
  o.full.reserve(total_dim_);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].size() != specs_[i].dim)
      throw std::invalid_argument("part for " + specs_[i].name + " has wrong dimension");
    o.full.insert(o.full.end(), parts[i].begin(), parts[i].end());
  }
  return o;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

double modular_reward(const GoalSpaceSpec& space, std::span<const double> target,
                      std::span<const double> outcome_slice) {
  if (target.size() != space.dim || outcome_slice.size() != space.dim)
    throw std::invalid_argument("goal dimension does not match space " + space.name);
  return -euclidean_distance(target, outcome_slice) / space.max_distance;
}

double modular_reward(const Problem& p, const Outcome& o, const GoalSpaceRegistry& spaces) {
  const auto& space = spaces.at(p.space_id);
  return modular_reward(space, p.target, spaces.slice(o, p.space_id));
}

double ball_pusher_reward(const BallPusherGoal& g, const Context&, const BallPusherOutcome& o) {
  if (g.alpha < 0.0 || g.beta < 0.0 || g.alpha + g.beta > 1.0)
    throw std::invalid_argument("ball pusher weights need alpha, beta >= 0 and alpha + beta <= 1");
  const double dx = g.translation[0] - o.ball_translation[0];
  const double dy = g.translation[1] - o.ball_translation[1];
  return g.alpha * std::exp(-(dx * dx + dy * dy)) + g.beta * o.min_wall_distance +
         (1.0 - g.alpha - g.beta) * std::exp(-o.energy * o.energy);
}

PartialReward::PartialReward(Context c, PolicyParams theta, Outcome o, const GoalSpaceRegistry& spaces)
    : context_(std::move(c)), theta_(std::move(theta)), outcome_(std::move(o)), spaces_(spaces) {}

double PartialReward::operator()(const Problem& p) const {
  return modular_reward(p, outcome_, spaces_);
}

std::vector<double> PartialReward::evaluate(std::span<const Problem> problems) const {
  std::vector<double> out;
  out.reserve(problems.size());
  for (const auto& p : problems) out.push_back((*this)(p));
  return out;
}

PartialReward partial_reward_function(const Context& c, const PolicyParams& theta,
                                      const Outcome& o, const GoalSpaceRegistry& spaces) {
  return PartialReward(c, theta, o, spaces);
}

}  // namespace imgep
