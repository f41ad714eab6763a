#pragma once

#include "lcequil/state.hpp"

namespace lc {

/// Newton system over active dofs: Hessian blocks of the discrete Lagrangian
/// and the first-order optimality residual.
struct AssembledSystem {
  SparseMat jacobian;
  VecX residual;
  std::shared_ptr<const Space> space;
};

/// Reported free energy (classical 1/2 weighting). The cholesteric value
/// includes the constant twist term so the helix ground state reports ~0.
double free_energy(const State& state, const MaterialParams& params, Model model);

/// Scalar value of the discrete Lagrangian being minimized (the rescaled
/// functional plus the constraint term); the quantity whose first variation
/// is the assembled residual.
double lagrangian_value(const State& state, const MaterialParams& params, Model model);

/// First-variation (Galerkin) vector over active dofs.
VecX assemble_residual(const State& state, const MaterialParams& params, Model model);

/// Second variation plus residual in one pass.
AssembledSystem assemble_system(const State& state, const MaterialParams& params,
                                Model model);

/// Mean of |n| over the Q2 node grid; the blow-up indicator.
double unit_length_violation(const State& state);

} // namespace lc
