#pragma once

#include "lcequil/deflation.hpp"

namespace lc {

/// Finite-difference and dense-algebra oracles, independent of the assembly
/// and matrix-free paths they validate. Shared by the `check` subcommand and
/// the test suites.

struct GradientCheck {
  double max_rel_err = 0.0;       // at the probe step
  double worst_order = 0.0;       // observed FD convergence order
};

struct HessianCheck {
  double max_rel_err = 0.0;
};

/// Compare the assembled residual against central differences of the scalar
/// Lagrangian over `ndirs` random active directions at `nstates` random
/// states. Probe step 1e-5; order estimated from steps 1e-3 and 1e-4.
GradientCheck check_gradient(const Problem& problem, int level, int nstates,
                             int ndirs, unsigned seed);

/// Compare Jacobian-vector products against central differences of the
/// residual.
HessianCheck check_hessian(const Problem& problem, int level, int nstates,
                           int ndirs, unsigned seed);

/// Relative mismatch between the Sherman-Morrison update and a dense solve of
/// the explicitly formed deflated system (eta J_A + A d^T) x = -eta A.
double check_sherman_morrison(const Problem& problem, int level, int nroots,
                              unsigned seed);

/// Random admissible state: boundary data applied, smooth interior noise.
State random_state(const Problem& problem, int level, unsigned seed,
                   double amplitude = 0.4);

/// Random active-space direction with unit Euclidean norm.
VecX random_direction(const Space& space, unsigned seed);

} // namespace lc
