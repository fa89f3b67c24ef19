#pragma once

#include "imgep/archive.hpp"
#include "imgep/tool_use_env.hpp"

namespace imgep {

/// Uniform test distribution over one goal space and the context box [-1, 1]^n.
struct TestDistribution {
  int space_id = 0;
  std::size_t samples = 200;
};

struct LossEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

/// Monte-Carlo estimate of the expected -R of the noise-free meta-policy:
/// for each sample, draw (p, c), force the environment into c, execute Pi(p, c)
/// and score the outcome. The environment passed in is cloned, never modified.
/// Throws std::invalid_argument when samples is 0 and BootstrapRequired when the
/// policy is empty.
LossEstimate evaluate_loss(const MetaPolicyArchive& policy, const Environment& env,
                           const TestDistribution& test, Rng& rng);

}  // namespace imgep
