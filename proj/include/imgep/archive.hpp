#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "imgep/core.hpp"
#include "imgep/kd_tree.hpp"


namespace imgep {

/// Raised when a meta-policy is queried before any experiment was stored.
class BootstrapRequired : public std::runtime_error {
 public:
  BootstrapRequired() : std::runtime_error("meta-policy archive is empty: bootstrap required") {}
};

struct ArchiveConfig {
  /// Weight of the squared context distance in the match objective.
  double context_weight = 1.0;
  /// Per-component variance of the exploration noise.
  double exploration_variance = 0.05;
  /// Full index rebuild cadence (insertions).
  std::size_t rebuild_every = 500;
  /// Keep trajectories with stored experiments.
  bool keep_trajectories = false;
};

/// Knowledge base of (c, theta, o) tuples with one exact nearest-neighbour index
/// per goal space. Implements the memory-based meta-policy and its noisy
/// exploration variant. Append-only.
///
/// The match objective for goal p in space k and context c is
///   R_p(c', theta, o)^2 + w * |c - c'|^2,
/// ties broken by the lowest insertion index.
class MetaPolicyArchive {
 public:
  struct Match {
    std::size_t index = 0;
    double objective = 0.0;
  };

  MetaPolicyArchive(GoalSpaceRegistry spaces, std::size_t context_dim, std::size_t theta_dim,
                    ArchiveConfig cfg = {});

  const GoalSpaceRegistry& spaces() const { return spaces_; }
  const ArchiveConfig& config() const { return cfg_; }
  std::size_t context_dim() const { return context_dim_; }
  std::size_t theta_dim() const { return theta_dim_; }

  std::size_t size() const { return experiments_.size(); }
  bool empty() const { return experiments_.empty(); }
  const Experiment& at(std::size_t i) const { return experiments_.at(i); }
  const std::vector<Experiment>& experiments() const { return experiments_; }

  /// Appends an experiment and indexes it in every goal space.
  void add(Experiment e);

  /// Exact objective of stored experiment i for (p, c).
  double objective(std::size_t i, const Problem& p, const Context& c) const;

  /// Index-backed arg-min of the objective; nullopt when empty.
  std::optional<Match> best_match(const Problem& p, const Context& c) const;

  /// Pi(theta | p, c). Throws BootstrapRequired when empty.
  PolicyParams sample_meta_policy(const Problem& p, const Context& c) const;

  /// Pi_eps(theta | p, c): Pi plus N(0, variance) per component, clipped to [-1, 1].
  PolicyParams sample_exploration_meta_policy(const Problem& p, const Context& c, Rng& rng) const;

  /// Immutable copy usable while this archive keeps growing.
  std::shared_ptr<const MetaPolicyArchive> snapshot() const;

  /// Forces a rebuild of all indices.
  void rebuild_indices();

 private:
  Vector index_point(std::size_t space_slot, const Context& c, std::span<const double> slice) const;
  void validate(const Experiment& e) const;

  GoalSpaceRegistry spaces_;
  std::size_t context_dim_;
  std::size_t theta_dim_;
  ArchiveConfig cfg_;
  std::vector<Experiment> experiments_;
  std::vector<KdTree> indices_;  // one per goal space, registry order
};

/// Applies N(0, variance) noise to theta and clips to [-1, 1].
PolicyParams perturb(const PolicyParams& theta, double variance, Rng& rng);

}  // namespace imgep
