#pragma once

#include <optional>

#include "lcequil/driver.hpp"

namespace lc {

enum class SweepParameter { K2, V };

struct SweepSpec {
  SweepParameter parameter = SweepParameter::V;
  double lo = 0.0, hi = 1.0;
  int steps = 2;
  ExperimentPreset preset;
  int depth = 3; // NI depth per point
};

struct BranchPoint {
  double parameter = 0.0;
  std::string solution_id;
  double theta_m = 0.0; // radians, in [0, pi/2]
  double energy = 0.0;
};

struct SweepResult {
  std::vector<BranchPoint> points;
  std::vector<std::pair<double, int>> branch_counts; // per parameter value
  // Midpoint between the last 1-branch and first >=3-branch parameters.
  std::optional<std::pair<double, double>> bifurcation_bracket;
  std::optional<double> bifurcation_estimate;
};

/// Maximum angular tilt: max over Q2 nodes of |asin(clamp(n2, -1, 1))|.
double theta_m(const State& state);

SweepResult sweep(const SweepSpec& spec, const RunOptions& opts = {});

} // namespace lc
