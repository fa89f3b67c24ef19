#pragma once

#include <array>
#include <span>
#include <vector>

#include "imgep/core.hpp"

namespace imgep::dmp {

inline constexpr std::size_t kBasis = 7;
inline constexpr std::size_t kJoints = 4;
inline constexpr std::size_t kParamsPerJoint = kBasis + 1;

/// Constants of the per-joint movement primitive.
///
/// The system is integrated in phase time s = t / duration, s in [0, 1]:
///   y'' = alpha_y (beta_y (g - y) - y') + f(x)
///   f(x) = gain * (sum psi_i w_i / sum psi_i) * x * (g - y0)
///   x'  = -alpha_x x,  x(0) = 1
struct DmpConfig {
  std::size_t n_steps = 30;
  double duration = 5.0;
  double alpha_y = 25.0;
  double beta_y = 6.25;
  double alpha_x = 5.0;
  double weight_gain = 300.0;
  double y0 = 0.0;
  /// RK4 substeps between consecutive output samples.
  std::size_t substeps = 10;
  std::array<double, kBasis> centers{};
  std::array<double, kBasis> widths{};

  /// Centers equally spaced in phase time mapped through x(s); widths such that
  /// neighbouring bases cross at half height.
  static DmpConfig standard(double alpha_x = 5.0);

  /// Throws std::invalid_argument on a malformed configuration.
  void validate() const;
};

struct JointDmpParams {
  std::array<double, kBasis> weights{};
  double end_position = 0.0;
};

/// Weighted-average forcing term at phase x (without the x (g - y0) factor).
double basis_mixture(const DmpConfig& cfg, std::span<const double, kBasis> weights, double x);

/// Positions at t_k = k * duration / n_steps for k = 0..n_steps-1, clipped to [-1, 1].
/// The first sample is the start position y0.
std::vector<double> rollout_joint(const JointDmpParams& params, const DmpConfig& cfg);

/// Rolls out the four arm joints (Shoulder Y, Shoulder X, Arm Z, Elbow Y) from a
/// 32-dim theta laid out joint-major (7 weights then the end position).
/// Returns n_steps rows of 4 joint positions. Throws on wrong dimension.
std::vector<std::array<double, kJoints>> rollout_arm(std::span<const double> theta,
                                                     const DmpConfig& cfg);

}  // namespace imgep::dmp
