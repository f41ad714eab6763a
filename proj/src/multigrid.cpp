#include "lcequil/multigrid.hpp"

#include <iostream>

namespace lc {
namespace {

constexpr double kDiagFloor = 1e-14;

} // namespace

MgLevel make_mg_level(const SparseMat& A, int lambda_begin, double bs_t) {
  MgLevel lvl;
  lvl.A = A;
  lvl.A.makeCompressed();
  lvl.lambda_begin = lambda_begin;
  const int n = static_cast<int>(A.rows());
  const int nu = lambda_begin;
  const int nl = n - nu;

  VecX diag = lvl.A.diagonal().head(nu);
  lvl.jacobi_fallback = false;
  for (int i = 0; i < nu; ++i)
    if (std::abs(diag[i]) < kDiagFloor) lvl.jacobi_fallback = true;

  if (lvl.jacobi_fallback) {
    // Relaxation singularity: fall back to damped Jacobi on the full system
    // with unit pivots on the offending rows.
    VecX full = lvl.A.diagonal();
    lvl.inv_tdiag.resize(n);
    for (int i = 0; i < n; ++i)
      lvl.inv_tdiag[i] =
          std::abs(full[i]) < kDiagFloor ? 1.0 : 1.0 / (bs_t * full[i]);
    return lvl;
  }

  lvl.inv_tdiag.resize(nu);
  for (int i = 0; i < nu; ++i) lvl.inv_tdiag[i] = 1.0 / (bs_t * diag[i]);

  if (nl > 0) {
    std::vector<Triplet> tb, tbt;
    for (int k = 0; k < lvl.A.outerSize(); ++k)
      for (SparseMat::InnerIterator it(lvl.A, k); it; ++it) {
        if (it.row() >= nu && it.col() < nu)
          tb.emplace_back(static_cast<int>(it.row()) - nu,
                          static_cast<int>(it.col()), it.value());
        else if (it.row() < nu && it.col() >= nu)
          tbt.emplace_back(static_cast<int>(it.row()),
                           static_cast<int>(it.col()) - nu, it.value());
      }
    lvl.B.resize(nl, nu);
    lvl.B.setFromTriplets(tb.begin(), tb.end());
    lvl.Bt.resize(nu, nl);
    lvl.Bt.setFromTriplets(tbt.begin(), tbt.end());
    // Schur complement B (tD)^{-1} B^T, factored once per setup.
    SparseMat BD = lvl.B * lvl.inv_tdiag.asDiagonal();
    SparseMat S = (BD * lvl.Bt).pruned();
    S.makeCompressed();
    lvl.schur_ldlt = std::make_shared<Eigen::SimplicialLDLT<SparseMat>>();
    lvl.schur_ldlt->compute(S);
    if (lvl.schur_ldlt->info() != Eigen::Success) {
      lvl.schur_ldlt.reset();
      lvl.schur_lu = std::make_shared<Eigen::SparseLU<SparseMat>>();
      lvl.schur_lu->compute(S);
      if (lvl.schur_lu->info() != Eigen::Success)
        throw std::runtime_error("multigrid: Schur factorization failed");
    }
  }
  return lvl;
}

void MgLevel::relax(const VecX& b, VecX& x) const {
  VecX r = b - A * x;
  const int n = static_cast<int>(A.rows());
  const int nu = lambda_begin;
  const int nl = n - nu;

  if (jacobi_fallback || nl == 0) {
    if (jacobi_fallback) {
      x += inv_tdiag.cwiseProduct(r);
    } else {
      x.head(nu) += inv_tdiag.cwiseProduct(r.head(nu));
    }
    return;
  }

  const VecX w = inv_tdiag.cwiseProduct(r.head(nu));
  // -B(tD)^{-1}B^T dl = r_l - B(tD)^{-1} r_u
  VecX rhs = B * w - r.tail(nl);
  VecX dl = schur_ldlt ? VecX(schur_ldlt->solve(rhs)) : VecX(schur_lu->solve(rhs));
  x.tail(nl) += dl;
  x.head(nu) += inv_tdiag.cwiseProduct(r.head(nu) - Bt * dl);
}

void MgHierarchy::vcycle(int k, const VecX& b, VecX& x) const {
  const auto& lvl = levels[k];
  if (k + 1 == static_cast<int>(levels.size())) {
    // Coarsest grid: direct solve.
    x = coarsest_singular ? VecX(coarsest_pinv * b) : coarsest_lu->solve(b);
    return;
  }
  for (int s = 0; s < pre_sweeps; ++s) lvl.relax(b, x);
  const VecX r = b - lvl.A * x;
  const auto& Pc = levels[k + 1].P;
  VecX rc = Pc.transpose() * r;
  VecX ec = VecX::Zero(rc.size());
  vcycle(k + 1, rc, ec);
  x += Pc * ec;
  for (int s = 0; s < post_sweeps; ++s) lvl.relax(b, x);
}

MgHierarchy build_hierarchy(const AssembledSystem& fine, SpaceCache& spaces,
                            const LinearSolveConfig& cfg) {
  MgHierarchy h;
  h.pre_sweeps = cfg.pre_sweeps;
  h.post_sweeps = cfg.post_sweeps;
  h.bs_t = cfg.bs_t;

  const int top = fine.space->mesh.level;
  h.levels.reserve(top + 1);
  h.levels.push_back(make_mg_level(fine.jacobian, fine.space->lambda_active_begin(), cfg.bs_t));

  // levels[k].P prolongates from level k into the finer level k-1.
  for (int l = top; l >= 1; --l) {
    const SparseMat& P = spaces.transfer_to(l); // mesh level l-1 -> l
    SparseMat Ac = (P.transpose() * h.levels.back().A * P).pruned();
    MgLevel lvl =
        make_mg_level(Ac, spaces.level(l - 1)->lambda_active_begin(), cfg.bs_t);
    lvl.P = P;
    h.levels.push_back(std::move(lvl));
  }

  auto& bottom = h.levels.back();
  h.coarsest_lu = std::make_shared<Eigen::SparseLU<SparseMat>>();
  h.coarsest_lu->compute(bottom.A);
  if (h.coarsest_lu->info() != Eigen::Success) {
    std::cerr << "lcequil: coarsest-level factorization failed; "
                 "falling back to a pseudo-inverse\n";
    h.coarsest_singular = true;
    h.coarsest_pinv = Eigen::MatrixXd(bottom.A)
                          .completeOrthogonalDecomposition()
                          .pseudoInverse();
  }
  return h;
}

void braess_sarazin_relax(const SparseMat& A, int lambda_begin, const VecX& b,
                          VecX& x, double bs_t) {
  MgLevel lvl = make_mg_level(A, lambda_begin, bs_t);
  lvl.relax(b, x);
}

} // namespace lc
