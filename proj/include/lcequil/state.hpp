#pragma once

#include <memory>

#include "lcequil/space.hpp"

namespace lc {

/// Coefficient vectors for one iterate: director components n1,n2,n3 (Q2),
/// optional potential phi (Q2) and multiplier lambda (P0), bound to a space.
struct State {
  std::shared_ptr<const Space> space;
  VecX u; // stored dofs

  State() = default; // unbound until assigned
  explicit State(std::shared_ptr<const Space> s)
      : space(std::move(s)), u(VecX::Zero(space->n_stored)) {}

  double n_value(int comp, int node) const {
    return u[space->field_offset(comp) + node];
  }
  double phi_value(int node) const { return u[space->phi_offset() + node]; }
  double lambda_value(int cell) const { return u[space->lambda_offset() + cell]; }

  /// Copy master values onto periodic slaves.
  void sync_slaves();
  /// Apply an active-dof update: u += omega * E(delta).
  void apply_update(const VecX& delta_active, double omega);
  VecX active() const;
};

/// Write Dirichlet boundary values from the problem's boundary data.
void apply_boundary_values(State& state, const Problem& problem);

/// Interpolate to the next finer space: Q2 fields through the coarse FE
/// expansion, P0 parent to children; constraints re-applied on the fine mesh.
State prolong(const State& state, const std::shared_ptr<const Space>& fine,
              const Problem& problem);

} // namespace lc
