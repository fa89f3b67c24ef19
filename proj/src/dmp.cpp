#include "imgep/dmp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace imgep::dmp {

DmpConfig DmpConfig::standard(double alpha_x) {
  DmpConfig cfg;
  cfg.alpha_x = alpha_x;
  for (std::size_t i = 0; i < kBasis; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(kBasis - 1);
    cfg.centers[i] = std::exp(-cfg.alpha_x * s);
  }
  for (std::size_t i = 0; i + 1 < kBasis; ++i) {
    const double gap = cfg.centers[i] - cfg.centers[i + 1];
    cfg.widths[i] = 4.0 * std::numbers::ln2 / (gap * gap);
  }
  cfg.widths[kBasis - 1] = cfg.widths[kBasis - 2];
  return cfg;
}

void DmpConfig::validate() const {
  if (n_steps < 2) throw std::invalid_argument("dmp needs at least two steps");
  if (substeps == 0) throw std::invalid_argument("dmp needs at least one substep");
  if (!(duration > 0.0 && alpha_y > 0.0 && beta_y > 0.0 && alpha_x > 0.0))
    throw std::invalid_argument("dmp time constants must be positive");
  for (std::size_t i = 0; i < kBasis; ++i) {
    if (!(widths[i] > 0.0)) throw std::invalid_argument("dmp basis widths must be positive");
    if (i > 0 && !(centers[i] < centers[i - 1]))
      throw std::invalid_argument("dmp basis centers must be strictly decreasing");
  }
}

double basis_mixture(const DmpConfig& cfg, std::span<const double, kBasis> weights, double x) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < kBasis; ++i) {
    const double d = x - cfg.centers[i];
    const double psi = std::exp(-cfg.widths[i] * d * d);
    num += psi * weights[i];
    den += psi;
  }
  return den > 0.0 ? num / den : 0.0;
}

namespace {

struct State {
  double y;
  double v;
  double x;
};

State derivative(const DmpConfig& cfg, const JointDmpParams& p, const State& s) {
  const double g = p.end_position;
  const double f = cfg.weight_gain * basis_mixture(cfg, p.weights, s.x) * s.x * (g - cfg.y0);
  return {s.v, cfg.alpha_y * (cfg.beta_y * (g - s.y) - s.v) + f, -cfg.alpha_x * s.x};
}

State axpy(const State& s, double h, const State& d) {
  return {s.y + h * d.y, s.v + h * d.v, s.x + h * d.x};
}

}  // namespace

std::vector<double> rollout_joint(const JointDmpParams& params, const DmpConfig& cfg) {
  std::vector<double> out;
  out.reserve(cfg.n_steps);
  State s{cfg.y0, 0.0, 1.0};
  const double h = 1.0 / static_cast<double>(cfg.n_steps * cfg.substeps);
  out.push_back(std::clamp(s.y, -1.0, 1.0));
  for (std::size_t k = 1; k < cfg.n_steps; ++k) {
    for (std::size_t j = 0; j < cfg.substeps; ++j) {
      const State k1 = derivative(cfg, params, s);
      const State k2 = derivative(cfg, params, axpy(s, 0.5 * h, k1));
      const State k3 = derivative(cfg, params, axpy(s, 0.5 * h, k2));
      const State k4 = derivative(cfg, params, axpy(s, h, k3));
      s.y += h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
      s.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
      s.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    }
    out.push_back(std::clamp(s.y, -1.0, 1.0));
  }
  return out;
}

std::vector<std::array<double, kJoints>> rollout_arm(std::span<const double> theta,
                                                     const DmpConfig& cfg) {
  if (theta.size() != kJoints * kParamsPerJoint)
    throw std::invalid_argument("arm policy needs " + std::to_string(kJoints * kParamsPerJoint) +
                                " parameters, got " + std::to_string(theta.size()));
  std::vector<std::array<double, kJoints>> actions(cfg.n_steps);
  for (std::size_t j = 0; j < kJoints; ++j) {
    JointDmpParams p;
    const auto block = theta.subspan(j * kParamsPerJoint, kParamsPerJoint);
    std::copy_n(block.begin(), kBasis, p.weights.begin());
    p.end_position = block[kBasis];
    const auto traj = rollout_joint(p, cfg);
    for (std::size_t t = 0; t < cfg.n_steps; ++t) actions[t][j] = traj[t];
  }
  return actions;
}

}  // namespace imgep::dmp
