#pragma once

#include <map>
#include <memory>
#include <vector>

#include "lcequil/mesh.hpp"
#include "lcequil/problem.hpp"
#include "lcequil/types.hpp"

namespace lc {

enum class DofStatus : unsigned char { Free, Dirichlet, Slave };

/// Discretization of one problem on one mesh level: Q2 scalar fields for the
/// director components (and the potential when present), P0 for the
/// multiplier, plus the Dirichlet/periodic constraint tables.
///
/// Stored dofs keep Dirichlet and periodic-slave entries (the reporting
/// convention); the linear systems run over the smaller active set.
struct Space {
  StructuredMesh mesh;
  bool has_phi = false;
  DirichletSides n_sides = DirichletSides::TopBottom;

  int q2n = 0;    // Q2 nodes per scalar field
  int ncells = 0; // P0 dofs
  int n_stored = 0;
  int n_active = 0;

  std::vector<DofStatus> status; // per stored dof
  std::vector<int> active_of;    // stored -> active index (-1 for Dirichlet)
  std::vector<int> rep_stored;   // active -> representative (Free) stored dof

  // Jacobian sparsity skeleton and per-cell value-pointer slots, filled on
  // the first assemblies (single-threaded).
  mutable std::shared_ptr<const SparseMat> jac_skeleton;
  mutable std::shared_ptr<const std::vector<int>> jac_slots;

  int n_fields() const { return has_phi ? 4 : 3; }
  int field_offset(int f) const { return f * q2n; }
  int phi_offset() const { return 3 * q2n; }
  int lambda_offset() const { return n_fields() * q2n; }
  int lambda_active_begin() const { return active_of[lambda_offset()]; }

  int node_index(int ix, int iy) const { return ix * mesh.q2_side() + iy; }
  bool compatible_with(const Space& o) const {
    return mesh.level == o.mesh.level && mesh.periodic_x == o.mesh.periodic_x &&
           has_phi == o.has_phi && n_sides == o.n_sides && n_stored == o.n_stored;
  }
  int cell_index(int cx, int cy) const { return cx * mesh.cells_per_side + cy; }

  /// E: active -> stored. Dirichlet entries are zero, slaves copy masters.
  void expand(const VecX& a, VecX& s) const;
  /// E^T: stored -> active. Slave entries fold into masters, Dirichlet drop.
  void fold(const VecX& s, VecX& a) const;
  /// Restriction of a constraint-consistent stored vector to active entries.
  void restrict_values(const VecX& s, VecX& a) const;
};

std::shared_ptr<const Space> make_space(const Problem& problem, int level);

/// FE interpolation between consecutive levels, active dofs to active dofs.
SparseMat build_transfer(const Space& coarse, const Space& fine);

/// Symmetric constraint elimination on a stored-size system: slave rows and
/// columns are folded into masters, slave rows are replaced by the tie
/// equation (slave - master = 0), Dirichlet rows/columns by (update = 0).
void apply_constraints(const Space& space, SparseMat& matrix, VecX& vector);

/// Shared per-level space cache for one problem.
class SpaceCache {
 public:
  explicit SpaceCache(Problem problem) : problem_(std::move(problem)) {}
  std::shared_ptr<const Space> level(int l);
  const Problem& problem() const { return problem_; }
  /// Transfer from level l-1 to level l.
  const SparseMat& transfer_to(int l);

 private:
  Problem problem_;
  std::map<int, std::shared_ptr<const Space>> spaces_;
  std::map<int, SparseMat> transfers_;
};

} // namespace lc
