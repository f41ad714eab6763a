#include "lcequil/linear_solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>

#include "lcequil/multigrid.hpp"

namespace lc {

struct InnerSolver::Impl {
  // Cached preconditioner state.
  bool have_setup = false;
  bool refresh_requested = false;
  long setup_rows = -1;
  MgHierarchy hierarchy;
  Eigen::SparseLU<SparseMat> direct;

  void setup(const AssembledSystem& sys, SpaceCache& spaces,
             const LinearSolveConfig& cfg) {
    switch (cfg.preconditioner) {
      case Preconditioner::Multigrid:
        hierarchy = build_hierarchy(sys, spaces, cfg);
        break;
      case Preconditioner::Direct:
        direct.compute(sys.jacobian);
        if (direct.info() != Eigen::Success)
          throw SolverStallError("direct preconditioner factorization failed");
        break;
      case Preconditioner::None:
        break;
    }
    have_setup = true;
    refresh_requested = false;
    setup_rows = sys.jacobian.rows();
  }
};

InnerSolver::InnerSolver(LinearSolveConfig cfg, std::shared_ptr<SpaceCache> spaces)
    : cfg_(cfg), spaces_(std::move(spaces)), impl_(std::make_unique<Impl>()) {}

InnerSolver::~InnerSolver() = default;

void InnerSolver::bind_meter(WorkUnitMeter* meter, int distance) {
  meter_ = meter;
  meter_distance_ = distance;
}

void InnerSolver::invalidate() { impl_->refresh_requested = true; }

namespace {

/// Right-preconditioned GMRES with modified Gram-Schmidt, no restarts.
/// x0 = 0, convergence on ||b - A x|| / ||b||.
struct GmresResult {
  VecX x;
  int iterations = 0;
  bool converged = false;
  double rel_residual = 0.0;
};

template <typename Precond>
GmresResult gmres(const SparseMat& A, const VecX& b, double rel_tol, int max_it,
                  Precond&& apply_precond) {
  GmresResult out;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.x = VecX::Zero(b.size());
    out.converged = true;
    return out;
  }

  std::vector<VecX> V, Z;
  std::vector<double> cs, sn;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(max_it + 1, max_it);
  VecX g = VecX::Zero(max_it + 1);

  V.push_back(b / bnorm);
  g[0] = bnorm;
  int iters = 0;
  for (int k = 0; k < max_it; ++k) {
    Z.push_back(apply_precond(V[k]));
    VecX w = A * Z[k];
    for (int j = 0; j <= k; ++j) {
      H(j, k) = w.dot(V[j]);
      w -= H(j, k) * V[j];
    }
    const double hnext = w.norm();

    // Maintain the QR of H by Givens rotations.
    for (int j = 0; j < k; ++j) {
      const double t = cs[j] * H(j, k) + sn[j] * H(j + 1, k);
      H(j + 1, k) = -sn[j] * H(j, k) + cs[j] * H(j + 1, k);
      H(j, k) = t;
    }
    const double denom = std::hypot(H(k, k), hnext);
    const double c = denom > 0.0 ? H(k, k) / denom : 1.0;
    const double s = denom > 0.0 ? hnext / denom : 0.0;
    cs.push_back(c);
    sn.push_back(s);
    H(k, k) = denom;
    g[k + 1] = -s * g[k];
    g[k] = c * g[k];

    iters = k + 1;
    const double rel = std::abs(g[k + 1]) / bnorm;
    if (rel <= rel_tol || hnext == 0.0) break; // converged or lucky breakdown
    if (k + 1 < max_it) V.push_back(w / hnext);
  }

  // Back-substitution on the triangular system.
  VecX y = VecX::Zero(iters);
  for (int i = iters - 1; i >= 0; --i) {
    double s = g[i];
    for (int j = i + 1; j < iters; ++j) s -= H(i, j) * y[j];
    y[i] = H(i, i) != 0.0 ? s / H(i, i) : 0.0;
  }
  VecX x = VecX::Zero(b.size());
  for (int j = 0; j < iters; ++j) x += y[j] * Z[j];

  out.x = std::move(x);
  out.iterations = iters;
  out.rel_residual = (b - A * out.x).norm() / bnorm;
  out.converged = out.rel_residual <= rel_tol;
  return out;
}

} // namespace

VecX InnerSolver::solve(const AssembledSystem& system, const VecX& rhs,
                        SolveStats* stats) {
  ++n_solves_;
  auto& im = *impl_;
  const bool dims_changed = im.setup_rows != system.jacobian.rows();
  if (!im.have_setup || im.refresh_requested || dims_changed)
    im.setup(system, *spaces_, cfg_);

  auto run = [&]() {
    switch (cfg_.preconditioner) {
      case Preconditioner::Multigrid:
        return gmres(system.jacobian, rhs, cfg_.rel_tol, cfg_.max_krylov,
                     [&](const VecX& v) {
                       VecX z = VecX::Zero(v.size());
                       im.hierarchy.vcycle(0, v, z);
                       if (meter_) meter_->add(meter_distance_);
                       return z;
                     });
      case Preconditioner::Direct:
        return gmres(system.jacobian, rhs, cfg_.rel_tol, cfg_.max_krylov,
                     [&](const VecX& v) { return VecX(im.direct.solve(v)); });
      default:
        return gmres(system.jacobian, rhs, cfg_.rel_tol, cfg_.max_krylov,
                     [](const VecX& v) { return v; });
    }
  };

  GmresResult res = run();
  if (!res.converged) {
    // A stale preconditioner may be the culprit: rebuild once and retry.
    im.setup(system, *spaces_, cfg_);
    res = run();
  }
  // Direct factorizations are expensive to refresh; tolerate more drift.
  const int threshold = cfg_.preconditioner == Preconditioner::Direct
                            ? std::max(cfg_.refresh_iter_threshold, 35)
                            : cfg_.refresh_iter_threshold;
  if (res.converged && res.iterations > threshold)
    im.refresh_requested = true;

  if (stats) {
    stats->iterations = res.iterations;
    stats->converged = res.converged;
    stats->rel_residual = res.rel_residual;
  }
  if (!res.converged)
    throw SolverStallError("GMRES did not reach tolerance within max_krylov");
  return std::move(res.x);
}

} // namespace lc
