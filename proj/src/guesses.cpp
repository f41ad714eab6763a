#include "lcequil/guesses.hpp"

#include <cmath>

namespace lc {

State make_guess_state(const Guess& guess, const std::shared_ptr<const Space>& space,
                       const Problem& problem) {
  State s(space);
  const auto& sp = *space;
  const int side = sp.mesh.q2_side();
  for (int ix = 0; ix < side; ++ix)
    for (int iy = 0; iy < side; ++iy) {
      const double x = sp.mesh.node_x(ix);
      const double y = sp.mesh.node_y(iy);
      const Vec3 n = guess.director(x, y);
      const int node = sp.node_index(ix, iy);
      for (int c = 0; c < 3; ++c) s.u[sp.field_offset(c) + node] = n[c];
      if (sp.has_phi)
        s.u[sp.phi_offset() + node] =
            guess.phi ? guess.phi(x, y) : problem.params.V * y;
    }
  // lambda stays 0
  apply_boundary_values(s, problem);
  return s;
}

std::vector<Guess> tilt_guess_pair() {
  const double c = std::cos(M_PI / 40.0), s = std::sin(M_PI / 40.0);
  return {
      {"tilt_plus", [=](double, double) { return Vec3(c, s, 0.0); }, nullptr},
      {"tilt_minus", [=](double, double) { return Vec3(c, -s, 0.0); }, nullptr},
  };
}

std::vector<Guess> disclination_guess_pair() {
  const double zeta = 9.0 * M_PI / 20.0;
  auto base = [zeta](double x, double y, double sign3) {
    if (x == 0.5 && y == 0.5) return Vec3(0.0, 0.0, 1.0);
    const double xi = std::abs(std::atan((0.5 - y) / (0.5 - x)));
    const double n1 = (x <= 0.5 ? 1.0 : -1.0) * std::sin(zeta) * std::cos(xi);
    const double n2 = (y <= 0.5 ? 1.0 : -1.0) * std::sin(zeta) * std::sin(xi);
    return Vec3(n1, n2, sign3 * std::cos(zeta));
  };
  return {
      {"escape_up", [=](double x, double y) { return base(x, y, 1.0); }, nullptr},
      {"escape_down", [=](double x, double y) { return base(x, y, -1.0); }, nullptr},
  };
}

std::vector<Guess> cholesteric_guess_triple() {
  const double xi2 = 7.0 * M_PI / 16.0, zeta2 = M_PI / 4.0;
  return {
      {"planar_uniform",
       [](double, double) {
         return Vec3(std::cos(M_PI / 12.0), std::sin(M_PI / 12.0), 0.0);
       },
       nullptr},
      {"modulated_tilt",
       [=](double x, double) {
         const double a = zeta2 * std::cos(4.0 * M_PI * x);
         return Vec3(std::sin(xi2) * std::cos(a), std::sin(xi2) * std::sin(a),
                     std::cos(xi2));
       },
       nullptr},
      {"helical",
       [](double, double y) {
         const double c = std::cos(2.0 * M_PI * y);
         return Vec3(c * std::cos(M_PI / 8.0), c * std::sin(M_PI / 8.0),
                     std::sin(2.0 * M_PI * y));
       },
       nullptr},
  };
}

} // namespace lc
