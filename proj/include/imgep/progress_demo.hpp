#pragma once

#include <string>

#include "imgep/bandit.hpp"

namespace imgep {

/// Scripted competence curve as a function of the practice count n of its arm.
struct CompetenceCurve {
  enum class Kind { kSaturating, kFlat, kNoisy };
  std::string name;
  Kind kind = Kind::kFlat;
  /// Saturating: logistic rise with midpoint `onset` and width `time_scale` (in
  /// practices), rescaled to start at 0 and approach `level`.
  double onset = 0.0;
  double time_scale = 1.0;
  /// Level of the flat and noisy curves, asymptote of the saturating ones.
  double level = 0.0;
  /// Standard deviation of the measurement noise (noisy curves only).
  double noise = 0.0;

  double competence(double n) const;
};

/// The five Fig.-1-style curves: three staggered learnable problems, a flat one
/// and an unlearnable noisy one.
std::vector<CompetenceCurve> standard_demo_curves();

struct DemoConfig {
  std::size_t steps = 4000;
  std::size_t window = 50;   // running average of progress per arm
  std::size_t trace_window = 200;  // sliding window for selection frequencies
  BanditConfig bandit;
  std::uint64_t seed = 0;
};

struct DemoTrace {
  std::vector<std::string> names;
  std::size_t trace_window = 0;
  std::vector<std::size_t> choices;
  std::vector<bool> uniform_branch;
  /// averages[t][k]: running progress average of arm k after step t.
  std::vector<Vector> averages;
  /// frequencies[t][k]: share of the last trace_window selections that went to arm k.
  std::vector<Vector> frequencies;

  /// Step at which the selection frequency of arm k peaks (first maximum once
  /// the sliding window is full).
  std::size_t peak_step(std::size_t arm) const;
  /// Share of goal-directed (non-uniform) selections from step `from` on that went to arm k.
  double greedy_share(std::size_t arm, std::size_t from) const;
};

/// Practising arm k raises its practice count; the intrinsic reward is the
/// change of measured competence since its previous practice.
DemoTrace synthetic_progress_demo(const std::vector<CompetenceCurve>& curves, const DemoConfig& cfg = {});

}  // namespace imgep
