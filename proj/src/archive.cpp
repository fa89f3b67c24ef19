#include "imgep/archive.hpp"

#include <cmath>

namespace imgep {

MetaPolicyArchive::MetaPolicyArchive(GoalSpaceRegistry spaces, std::size_t context_dim,
                                     std::size_t theta_dim, ArchiveConfig cfg)
    : spaces_(std::move(spaces)), context_dim_(context_dim), theta_dim_(theta_dim), cfg_(cfg) {
  if (cfg_.context_weight < 0.0) throw std::invalid_argument("context weight must be non-negative");
  if (cfg_.exploration_variance < 0.0) throw std::invalid_argument("exploration variance must be non-negative");
  if (cfg_.rebuild_every == 0) throw std::invalid_argument("rebuild cadence must be positive");
  indices_.reserve(spaces_.size());
  for (const auto& s : spaces_.spaces()) indices_.emplace_back(context_dim_ + s.dim);
}

Vector MetaPolicyArchive::index_point(std::size_t slot, const Context& c,
                                      std::span<const double> slice) const {
  const auto& spec = spaces_.spaces()[slot];
  const double cw = std::sqrt(cfg_.context_weight);
  Vector p;
  p.reserve(context_dim_ + spec.dim);
  for (double v : c.values) p.push_back(cw * v);
  for (double v : slice) p.push_back(v / spec.max_distance);
  return p;
}

void MetaPolicyArchive::validate(const Experiment& e) const {
  if (e.context.size() != context_dim_) throw std::invalid_argument("experiment context has wrong dimension");
  if (e.theta.size() != theta_dim_) throw std::invalid_argument("experiment theta has wrong dimension");
  if (e.outcome.full.size() != spaces_.total_dim())
    throw std::invalid_argument("experiment outcome has wrong dimension");
}

void MetaPolicyArchive::add(Experiment e) {
  validate(e);
  if (!cfg_.keep_trajectories) e.trajectory.reset();
  const std::size_t id = experiments_.size();
  experiments_.push_back(std::move(e));
  const Experiment& stored = experiments_.back();
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    const auto& spec = spaces_.spaces()[k];
    indices_[k].insert(index_point(k, stored.context, spaces_.slice(stored.outcome, spec.id)), id);
  }
  if (indices_.front().pending() >= cfg_.rebuild_every) rebuild_indices();
}

void MetaPolicyArchive::rebuild_indices() {
  for (auto& idx : indices_) idx.rebuild();
}

double MetaPolicyArchive::objective(std::size_t i, const Problem& p, const Context& c) const {
  const Experiment& e = experiments_.at(i);
  const double r = modular_reward(p, e.outcome, spaces_);
  return r * r + cfg_.context_weight * squared_distance(c.values, e.context.values);
}

std::optional<MetaPolicyArchive::Match> MetaPolicyArchive::best_match(const Problem& p,
                                                                      const Context& c) const {
  if (experiments_.empty()) return std::nullopt;
  const auto& spec = spaces_.at(p.space_id);
  if (p.target.size() != spec.dim) throw std::invalid_argument("goal dimension does not match space " + spec.name);
  if (c.size() != context_dim_) throw std::invalid_argument("query context has wrong dimension");
  std::size_t slot = 0;
  while (spaces_.spaces()[slot].id != p.space_id) ++slot;
  const Vector q = index_point(slot, c, p.target);
  const auto m = indices_[slot].nearest(q, [&](std::size_t id) { return objective(id, p, c); });
  return Match{m->id, m->score};
}

PolicyParams MetaPolicyArchive::sample_meta_policy(const Problem& p, const Context& c) const {
  const auto m = best_match(p, c);
  if (!m) throw BootstrapRequired();
  return experiments_[m->index].theta;
}

PolicyParams perturb(const PolicyParams& theta, double variance, Rng& rng) {
  PolicyParams out = theta;
  if (variance == 0.0) return out;
  std::normal_distribution<double> noise(0.0, std::sqrt(variance));
  for (double& v : out.values) v += noise(rng);
  out.clip();
  return out;
}

PolicyParams MetaPolicyArchive::sample_exploration_meta_policy(const Problem& p, const Context& c,
                                                               Rng& rng) const {
  return perturb(sample_meta_policy(p, c), cfg_.exploration_variance, rng);
}

std::shared_ptr<const MetaPolicyArchive> MetaPolicyArchive::snapshot() const {
  if (experiments_.empty()) throw BootstrapRequired();
  return std::make_shared<const MetaPolicyArchive>(*this);
}

}  // namespace imgep
