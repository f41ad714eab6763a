#pragma once

#include "lcequil/guesses.hpp"
#include "lcequil/newton.hpp"

namespace lc {

/// Full configuration bundle for one experiment.
struct ExperimentPreset {
  std::string name;
  Problem problem;
  DampingSchedule undeflated; // omega1 rising by delta1 per refinement
  DampingSchedule deflated;   // omega2 falling by delta2 per refinement
  DeflationConfig deflation;
  std::vector<Guess> guesses;
  int default_levels = 3;
};

std::vector<std::string> preset_names();
ExperimentPreset make_preset(const std::string& name); // throws on unknown name

class UnknownKeyError : public std::runtime_error {
 public:
  explicit UnknownKeyError(const std::string& w) : std::runtime_error(w) {}
};

/// Override a preset field by dotted key, e.g. "params.K2", "deflation.alpha",
/// "damping.omega1". Throws UnknownKeyError.
void apply_override(ExperimentPreset& preset, const std::string& key, double value);

} // namespace lc
