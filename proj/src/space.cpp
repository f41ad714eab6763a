#include "lcequil/space.hpp"

#include <stdexcept>

#include "lcequil/quadrature.hpp"

namespace lc {
namespace {

bool is_dirichlet_node(const Space& sp, int ix, int iy) {
  const int last = sp.mesh.q2_side() - 1;
  const bool tb = (iy == 0 || iy == last);
  const bool lr = (ix == 0 || ix == last);
  switch (sp.n_sides) {
    case DirichletSides::None: return false;
    case DirichletSides::TopBottom: return tb;
    case DirichletSides::All: return tb || lr;
  }
  return false;
}

} // namespace

void Space::expand(const VecX& a, VecX& s) const {
  s.setZero(n_stored);
  for (int i = 0; i < n_stored; ++i)
    if (active_of[i] >= 0) s[i] = a[active_of[i]];
}

void Space::fold(const VecX& s, VecX& a) const {
  a.setZero(n_active);
  for (int i = 0; i < n_stored; ++i)
    if (active_of[i] >= 0) a[active_of[i]] += s[i];
}

void Space::restrict_values(const VecX& s, VecX& a) const {
  a.resize(n_active);
  for (int k = 0; k < n_active; ++k) a[k] = s[rep_stored[k]];
}

std::shared_ptr<const Space> make_space(const Problem& problem, int level) {
  auto sp = std::make_shared<Space>();
  sp->mesh = build_mesh(level, problem.periodic_x);
  sp->has_phi = problem.electric;
  sp->n_sides = problem.director_sides;
  sp->q2n = static_cast<int>(sp->mesh.q2_count());
  sp->ncells = static_cast<int>(sp->mesh.cell_count());
  sp->n_stored = sp->n_fields() * sp->q2n + sp->ncells;

  sp->status.assign(sp->n_stored, DofStatus::Free);
  std::vector<int> master(sp->n_stored, -1);

  const int side = sp->mesh.q2_side();
  const int last = side - 1;
  for (int f = 0; f < sp->n_fields(); ++f) {
    const int off = sp->field_offset(f);
    const bool is_phi = sp->has_phi && f == 3;
    for (int ix = 0; ix < side; ++ix)
      for (int iy = 0; iy < side; ++iy) {
        const int dof = off + sp->node_index(ix, iy);
        const bool dirichlet =
            is_phi ? (iy == 0 || iy == last) : is_dirichlet_node(*sp, ix, iy);
        if (dirichlet) {
          sp->status[dof] = DofStatus::Dirichlet;
        } else if (sp->mesh.periodic_x && ix == last) {
          sp->status[dof] = DofStatus::Slave;
          master[dof] = off + sp->node_index(0, iy);
        }
      }
  }

  sp->active_of.assign(sp->n_stored, -1);
  sp->rep_stored.clear();
  int next = 0;
  for (int i = 0; i < sp->n_stored; ++i) {
    if (sp->status[i] == DofStatus::Free) {
      sp->active_of[i] = next++;
      sp->rep_stored.push_back(i);
    }
  }
  for (int i = 0; i < sp->n_stored; ++i)
    if (sp->status[i] == DofStatus::Slave) sp->active_of[i] = sp->active_of[master[i]];
  sp->n_active = next;
  return sp;
}

SparseMat build_transfer(const Space& coarse, const Space& fine) {
  if (fine.mesh.level != coarse.mesh.level + 1 ||
      fine.mesh.periodic_x != coarse.mesh.periodic_x ||
      fine.has_phi != coarse.has_phi || fine.n_sides != coarse.n_sides)
    throw std::invalid_argument("build_transfer: incompatible spaces");

  const int nc = coarse.mesh.cells_per_side;
  const int fside = fine.mesh.q2_side();
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(fine.n_active) * 9);

  // Q2 fields: coarse basis evaluated at fine node coordinates.
  for (int f = 0; f < fine.n_fields(); ++f) {
    const int foff = fine.field_offset(f);
    const int coff = coarse.field_offset(f);
    for (int ix = 0; ix < fside; ++ix) {
      for (int iy = 0; iy < fside; ++iy) {
        const int fdof = foff + fine.node_index(ix, iy);
        if (fine.status[fdof] != DofStatus::Free) continue;
        const int row = fine.active_of[fdof];
        // Containing coarse cell and reference coordinates therein.
        const int cx = std::min(ix / 4, nc - 1);
        const int cy = std::min(iy / 4, nc - 1);
        const double rx = 0.25 * ix - cx;
        const double ry = 0.25 * iy - cy;
        for (int a = 0; a < 3; ++a) {
          const double vx = q2::shape_1d(a, rx);
          if (vx == 0.0) continue;
          for (int b = 0; b < 3; ++b) {
            const double w = vx * q2::shape_1d(b, ry);
            if (w == 0.0) continue;
            const int cdof = coff + coarse.node_index(2 * cx + a, 2 * cy + b);
            const int col = coarse.active_of[cdof];
            if (col >= 0) trips.emplace_back(row, col, w);
          }
        }
      }
    }
  }

  // P0: children copy the parent value.
  const int nf = fine.mesh.cells_per_side;
  for (int cx = 0; cx < nf; ++cx)
    for (int cy = 0; cy < nf; ++cy) {
      const int row =
          fine.active_of[fine.lambda_offset() + fine.cell_index(cx, cy)];
      const int col = coarse.active_of[coarse.lambda_offset() +
                                       coarse.cell_index(cx / 2, cy / 2)];
      trips.emplace_back(row, col, 1.0);
    }

  SparseMat P(fine.n_active, coarse.n_active);
  P.setFromTriplets(trips.begin(), trips.end());
  P.makeCompressed();
  return P;
}

void apply_constraints(const Space& space, SparseMat& matrix, VecX& vector) {
  if (matrix.rows() != space.n_stored || vector.size() != space.n_stored)
    throw std::invalid_argument("apply_constraints: stored-size system expected");

  // Representative (Free dof) of each stored dof, -1 for Dirichlet.
  std::vector<int> rep(space.n_stored, -1);
  for (int i = 0; i < space.n_stored; ++i)
    if (space.active_of[i] >= 0) rep[i] = space.rep_stored[space.active_of[i]];

  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(matrix.nonZeros()) + space.n_stored);
  for (int k = 0; k < matrix.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(matrix, k); it; ++it) {
      const int ri = rep[it.row()];
      const int ci = rep[it.col()];
      if (ri < 0 || ci < 0) continue; // Dirichlet row/column eliminated
      trips.emplace_back(ri, ci, it.value());
    }
  }
  VecX rhs = VecX::Zero(space.n_stored);
  for (int i = 0; i < space.n_stored; ++i)
    if (rep[i] >= 0) rhs[rep[i]] += vector[i];

  for (int i = 0; i < space.n_stored; ++i) {
    if (space.status[i] == DofStatus::Dirichlet) {
      trips.emplace_back(i, i, 1.0); // homogeneous update
    } else if (space.status[i] == DofStatus::Slave) {
      trips.emplace_back(i, i, 1.0); // slave - master = 0
      trips.emplace_back(i, rep[i], -1.0);
    }
  }

  SparseMat out(space.n_stored, space.n_stored);
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  matrix.swap(out);
  vector = rhs;
}

std::shared_ptr<const Space> SpaceCache::level(int l) {
  auto it = spaces_.find(l);
  if (it != spaces_.end()) return it->second;
  auto sp = make_space(problem_, l);
  spaces_.emplace(l, sp);
  return sp;
}

const SparseMat& SpaceCache::transfer_to(int l) {
  auto it = transfers_.find(l);
  if (it != transfers_.end()) return it->second;
  auto P = build_transfer(*level(l - 1), *level(l));
  return transfers_.emplace(l, std::move(P)).first->second;
}

} // namespace lc
