#pragma once

#include <optional>

#include "imgep/archive.hpp"
#include "imgep/kd_tree.hpp"

namespace imgep {

struct SurrogateConfig {
  /// Neighbourhood size K of the local model.
  std::size_t neighbors = 20;
  /// Kernel bandwidth; nullopt means the mean distance to the K neighbours.
  std::optional<double> bandwidth;
  /// Ridge penalty on the slope terms (the intercept is not penalized).
  double ridge = 1e-3;
};

/// Locally weighted linear regression of the reward of problem p over the
/// joint (context, theta) space, fitted on the archive contents at
/// construction. A local model is rebuilt around every query point.
class SurrogateModel {
 public:
  /// Throws std::invalid_argument when the archive holds fewer than K experiments.
  SurrogateModel(const MetaPolicyArchive& archive, Problem p, SurrogateConfig cfg = {});

  double predict(const Context& c, const PolicyParams& theta) const;

  const SurrogateConfig& config() const { return cfg_; }

 private:
  SurrogateConfig cfg_;
  std::size_t dim_;
  std::vector<Vector> inputs_;
  std::vector<double> rewards_;
  KdTree index_;
};

}  // namespace imgep
