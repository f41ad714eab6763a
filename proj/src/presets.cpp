#include "lcequil/presets.hpp"

#include <cmath>

namespace lc {

std::vector<std::string> preset_names() {
  return {"tilt_twist", "freedericksz", "disclination", "cholesteric"};
}

ExperimentPreset make_preset(const std::string& name) {
  ExperimentPreset p;
  p.name = name;
  p.deflation = DeflationConfig{3.0, 1.0};
  p.default_levels = 3;

  if (name == "tilt_twist") {
    p.problem.model = Model::Nematic;
    p.problem.periodic_x = true;
    p.problem.director_sides = DirichletSides::TopBottom;
    p.problem.params.K1 = 1.0;
    p.problem.params.K2 = 3.0;
    p.problem.params.K3 = 1.2;
    p.problem.bc.director = [](double, double y) {
      const double ang = (2.0 * y - 1.0) * M_PI / 4.0; // -pi/4 bottom, pi/4 top
      return Vec3(std::cos(ang), 0.0, std::sin(ang));
    };
    p.undeflated = {1.0, 0.0, DampingSchedule::Mode::Increasing};
    p.deflated = {1.0, 0.5, DampingSchedule::Mode::Decreasing};
    p.guesses = tilt_guess_pair();
  } else if (name == "freedericksz") {
    p.problem.model = Model::Nematic;
    p.problem.electric = true;
    p.problem.periodic_x = true;
    p.problem.director_sides = DirichletSides::TopBottom;
    p.problem.params.K1 = 1.0;
    p.problem.params.K2 = 0.62903;
    p.problem.params.K3 = 1.32258;
    p.problem.params.eps0 = 1.42809;
    p.problem.params.eps_perp = 7.0;
    p.problem.params.eps_a = 11.5;
    p.problem.params.V = 1.1;
    p.problem.bc.director = [](double, double) { return Vec3(1.0, 0.0, 0.0); };
    p.undeflated = {1.0, 0.0, DampingSchedule::Mode::Increasing};
    p.deflated = {1.0, 0.5, DampingSchedule::Mode::Decreasing};
    p.guesses = tilt_guess_pair();
  } else if (name == "disclination") {
    p.problem.model = Model::Nematic;
    p.problem.periodic_x = false;
    p.problem.director_sides = DirichletSides::All;
    p.problem.params.K1 = 1.0;
    p.problem.params.K2 = 3.0;
    p.problem.params.K3 = 1.2;
    // Director facing the domain center on the whole boundary.
    p.problem.bc.director = [](double x, double y) {
      const double cx = 0.5 - x, cy = 0.5 - y;
      const double r = std::sqrt(cx * cx + cy * cy);
      return Vec3(cx / r, cy / r, 0.0);
    };
    p.undeflated = {0.4, 0.2, DampingSchedule::Mode::Increasing};
    p.deflated = {1.0, 0.5, DampingSchedule::Mode::Decreasing};
    p.guesses = disclination_guess_pair();
  } else if (name == "cholesteric") {
    p.problem.model = Model::Cholesteric;
    p.problem.periodic_x = true;
    p.problem.director_sides = DirichletSides::TopBottom;
    p.problem.params.K1 = 1.0;
    p.problem.params.K2 = 3.0;
    p.problem.params.K3 = 1.2;
    p.problem.params.t0 = -2.0 * M_PI;
    p.problem.bc.director = [](double, double) { return Vec3(1.0, 0.0, 0.0); };
    p.undeflated = {0.2, 0.2, DampingSchedule::Mode::Increasing};
    p.deflated = {0.2, 0.0, DampingSchedule::Mode::Decreasing};
    p.guesses = cholesteric_guess_triple();
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }

  // Potential boundary data is linear in y for all electric presets.
  if (p.problem.electric) {
    const double V = p.problem.params.V;
    p.problem.bc.phi = [V](double, double y) { return V * y; };
  }
  return p;
}

void apply_override(ExperimentPreset& preset, const std::string& key, double value) {
  auto& mp = preset.problem.params;
  if (key == "params.K1") mp.K1 = value;
  else if (key == "params.K2") mp.K2 = value;
  else if (key == "params.K3") mp.K3 = value;
  else if (key == "params.eps0") mp.eps0 = value;
  else if (key == "params.eps_perp") mp.eps_perp = value;
  else if (key == "params.eps_a") mp.eps_a = value;
  else if (key == "params.t0") mp.t0 = value;
  else if (key == "params.V") {
    mp.V = value;
    if (preset.problem.electric)
      preset.problem.bc.phi = [value](double, double y) { return value * y; };
  } else if (key == "deflation.alpha") preset.deflation.alpha = value;
  else if (key == "deflation.p") preset.deflation.p = value;
  else if (key == "damping.omega1") preset.undeflated.omega0 = value;
  else if (key == "damping.delta1") preset.undeflated.delta = value;
  else if (key == "damping.omega2") preset.deflated.omega0 = value;
  else if (key == "damping.delta2") preset.deflated.delta = value;
  else if (key == "levels") preset.default_levels = static_cast<int>(value);
  else throw UnknownKeyError("unknown override key: " + key);
}

} // namespace lc
