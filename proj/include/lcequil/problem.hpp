#pragma once

#include <functional>
#include <string>

#include "lcequil/types.hpp"

namespace lc {

enum class Model { Nematic, Cholesteric };

/// Nondimensional material and device constants.
struct MaterialParams {
  double K1 = 1.0, K2 = 1.0, K3 = 1.0;
  double eps0 = 0.0;     // permittivity scale, 1.42809 when a field is present
  double eps_perp = 0.0; // perpendicular dielectric constant
  double eps_a = 0.0;    // dielectric anisotropy
  double t0 = 0.0;       // cholesteric twist (0 for nematics)
  double V = 0.0;        // voltage at the top substrate
};

enum class DirichletSides { None, TopBottom, All };

/// Continuum boundary data; evaluated at boundary node coordinates.
struct BoundaryData {
  std::function<Vec3(double, double)> director; // on Dirichlet sides
  std::function<double(double, double)> phi;    // top/bottom, electric only
};

struct Problem {
  Model model = Model::Nematic;
  bool electric = false; // potential field present
  bool periodic_x = false;
  DirichletSides director_sides = DirichletSides::TopBottom;
  MaterialParams params;
  BoundaryData bc;

  void validate() const;
};

} // namespace lc
