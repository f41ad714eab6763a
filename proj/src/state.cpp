#include "lcequil/state.hpp"

#include <stdexcept>

#include "lcequil/quadrature.hpp"

namespace lc {

void State::sync_slaves() {
  const auto& sp = *space;
  for (int i = 0; i < sp.n_stored; ++i)
    if (sp.status[i] == DofStatus::Slave) u[i] = u[sp.rep_stored[sp.active_of[i]]];
}

void State::apply_update(const VecX& delta_active, double omega) {
  const auto& sp = *space;
  for (int i = 0; i < sp.n_stored; ++i)
    if (sp.active_of[i] >= 0) u[i] += omega * delta_active[sp.active_of[i]];
}

VecX State::active() const {
  VecX a;
  space->restrict_values(u, a);
  return a;
}

void apply_boundary_values(State& state, const Problem& problem) {
  const auto& sp = *state.space;
  const int side = sp.mesh.q2_side();
  for (int ix = 0; ix < side; ++ix) {
    for (int iy = 0; iy < side; ++iy) {
      const int node = sp.node_index(ix, iy);
      const double x = sp.mesh.node_x(ix);
      const double y = sp.mesh.node_y(iy);
      if (sp.status[sp.field_offset(0) + node] == DofStatus::Dirichlet) {
        if (!problem.bc.director)
          throw std::invalid_argument("apply_boundary_values: missing director data");
        const Vec3 n = problem.bc.director(x, y);
        for (int c = 0; c < 3; ++c) state.u[sp.field_offset(c) + node] = n[c];
      }
      if (sp.has_phi && sp.status[sp.phi_offset() + node] == DofStatus::Dirichlet) {
        if (!problem.bc.phi)
          throw std::invalid_argument("apply_boundary_values: missing phi data");
        state.u[sp.phi_offset() + node] = problem.bc.phi(x, y);
      }
    }
  }
  state.sync_slaves();
}

State prolong(const State& state, const std::shared_ptr<const Space>& fine,
              const Problem& problem) {
  const auto& csp = *state.space;
  const auto& fsp = *fine;
  if (fsp.mesh.level != csp.mesh.level + 1 ||
      fsp.mesh.periodic_x != csp.mesh.periodic_x || fsp.has_phi != csp.has_phi)
    throw std::invalid_argument("prolong: fine space must be one level up");

  State out(fine);
  const int nc = csp.mesh.cells_per_side;
  const int fside = fsp.mesh.q2_side();
  for (int f = 0; f < fsp.n_fields(); ++f) {
    const int foff = fsp.field_offset(f);
    const int coff = csp.field_offset(f);
    for (int ix = 0; ix < fside; ++ix) {
      for (int iy = 0; iy < fside; ++iy) {
        const int cx = std::min(ix / 4, nc - 1);
        const int cy = std::min(iy / 4, nc - 1);
        const double rx = 0.25 * ix - cx;
        const double ry = 0.25 * iy - cy;
        double v = 0.0;
        for (int l = 0; l < 9; ++l)
          v += q2::value(l, rx, ry) *
               state.u[coff + csp.node_index(2 * cx + l / 3, 2 * cy + l % 3)];
        out.u[foff + fsp.node_index(ix, iy)] = v;
      }
    }
  }
  const int nf = fsp.mesh.cells_per_side;
  for (int cx = 0; cx < nf; ++cx)
    for (int cy = 0; cy < nf; ++cy)
      out.u[fsp.lambda_offset() + fsp.cell_index(cx, cy)] =
          state.u[csp.lambda_offset() + csp.cell_index(cx / 2, cy / 2)];

  apply_boundary_values(out, problem);
  return out;
}

} // namespace lc
