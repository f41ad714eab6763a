#include "lcequil/sweeps.hpp"

#include <cmath>

namespace lc {

double theta_m(const State& state) {
  const auto& sp = *state.space;
  double best = 0.0;
  const int off = sp.field_offset(1);
  for (int node = 0; node < sp.q2n; ++node) {
    const double n2 = std::clamp(state.u[off + node], -1.0, 1.0);
    best = std::max(best, std::abs(std::asin(n2)));
  }
  return best;
}

SweepResult sweep(const SweepSpec& spec, const RunOptions& opts) {
  if (!(spec.lo < spec.hi))
    throw std::invalid_argument("sweep: require lo < hi");
  if (spec.steps < 2) throw std::invalid_argument("sweep: require steps >= 2");

  SweepResult result;
  for (int i = 0; i < spec.steps; ++i) {
    const double value =
        spec.lo + (spec.hi - spec.lo) * i / static_cast<double>(spec.steps - 1);
    ExperimentPreset preset = spec.preset;
    apply_override(preset,
                   spec.parameter == SweepParameter::K2 ? "params.K2" : "params.V",
                   value);

    const RunReport report = run_experiment(preset, spec.depth, opts);
    for (const auto& rec : report.solutions)
      result.points.push_back({value, rec.id, theta_m(rec.state),
                               rec.energy_at(spec.depth)});
    result.branch_counts.emplace_back(value,
                                      static_cast<int>(report.solutions.size()));
  }

  std::optional<double> last_single;
  std::optional<double> first_multi;
  for (const auto& [value, count] : result.branch_counts) {
    if (count == 1) last_single = value;
    if (count >= 3 && !first_multi) first_multi = value;
  }
  if (last_single && first_multi && *last_single < *first_multi) {
    result.bifurcation_bracket = std::make_pair(*last_single, *first_multi);
    result.bifurcation_estimate = 0.5 * (*last_single + *first_multi);
  }
  return result;
}

} // namespace lc
