#pragma once

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <memory>
#include <optional>
#include <vector>

#include "lcequil/linear_solver.hpp"

namespace lc {

/// One level of the geometric hierarchy. The primal block (director and
/// potential rows) is approximated by its scaled diagonal during relaxation;
/// the multiplier block gets a pressure-Schur solve.
struct MgLevel {
  SparseMat A;
  SparseMat P;            // prolongation from this level's coarser neighbor
  int lambda_begin = 0;   // first multiplier row (== rows when none)
  VecX inv_tdiag;         // 1 / (t * diag(A_primal))
  SparseMat B;            // multiplier x primal coupling
  SparseMat Bt;
  std::shared_ptr<Eigen::SimplicialLDLT<SparseMat>> schur_ldlt;
  std::shared_ptr<Eigen::SparseLU<SparseMat>> schur_lu;
  bool jacobi_fallback = false; // zero primal diagonal: damped Jacobi instead

  void relax(const VecX& b, VecX& x) const;
};

struct MgHierarchy {
  std::vector<MgLevel> levels; // [0] = finest
  std::shared_ptr<Eigen::SparseLU<SparseMat>> coarsest_lu;
  Eigen::MatrixXd coarsest_pinv; // fallback when the coarsest solve is singular
  bool coarsest_singular = false;
  int pre_sweeps = 1, post_sweeps = 1;
  double bs_t = 1.5;

  /// One V(pre,post)-cycle on level k for A_k x = b, updating x in place.
  void vcycle(int k, const VecX& b, VecX& x) const;
};

/// Build the hierarchy for a Newton system: coarse matrices by Galerkin
/// triple products through the cached FE interpolation operators, direct
/// solver on the 8x8 level.
MgHierarchy build_hierarchy(const AssembledSystem& fine, SpaceCache& spaces,
                            const LinearSolveConfig& cfg);

/// Standalone Braess-Sarazin sweep for tests: one relaxation on A x = b with
/// the multiplier rows starting at lambda_begin.
void braess_sarazin_relax(const SparseMat& A, int lambda_begin, const VecX& b,
                          VecX& x, double bs_t);

MgLevel make_mg_level(const SparseMat& A, int lambda_begin, double bs_t);

} // namespace lc
