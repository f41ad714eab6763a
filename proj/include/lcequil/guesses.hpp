#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lcequil/state.hpp"

namespace lc {

/// Parametric initial-guess constructor: interior director profile plus an
/// optional potential profile. The multiplier always starts at zero and
/// Dirichlet data is imposed after evaluation.
struct Guess {
  std::string name;
  std::function<Vec3(double, double)> director;
  std::function<double(double, double)> phi; // defaults to V*y when electric
};

State make_guess_state(const Guess& guess, const std::shared_ptr<const Space>& space,
                       const Problem& problem);

// Guess families used by the experiment presets.
std::vector<Guess> tilt_guess_pair();                  // (cos, +-sin)(pi/40)
std::vector<Guess> disclination_guess_pair();
std::vector<Guess> cholesteric_guess_triple();

} // namespace lc
