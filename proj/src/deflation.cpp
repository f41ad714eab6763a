#include "lcequil/deflation.hpp"

#include <cmath>

namespace lc {

std::vector<double> root_distances(const GramOperator& gram, const State& u,
                                   const DeflationSet& set) {
  std::vector<double> d;
  d.reserve(set.roots.size());
  for (const auto& r : set.roots) d.push_back(u_distance(gram, u, r));
  return d;
}

double eta(const GramOperator& gram, const State& u, const DeflationSet& set,
           const DeflationConfig& cfg) {
  double out = 1.0;
  for (double dist : root_distances(gram, u, set)) {
    if (dist <= kRootCoincidence)
      throw SingularDeflationError("eta: iterate coincides with a deflated root");
    out *= std::pow(dist, -cfg.p) + cfg.alpha;
  }
  return out;
}

VecX eta_gradient(const GramOperator& gram, const State& u, const DeflationSet& set,
                  const DeflationConfig& cfg) {
  VecX g = VecX::Zero(u.space->n_active);
  if (set.empty()) return g;

  const VecX ua = u.active();
  const std::vector<double> dist = root_distances(gram, u, set);
  std::vector<double> factor(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] <= kRootCoincidence)
      throw SingularDeflationError("eta_gradient: iterate coincides with a root");
    factor[i] = std::pow(dist[i], -cfg.p) + cfg.alpha;
  }
  for (std::size_t i = 0; i < dist.size(); ++i) {
    double others = 1.0;
    for (std::size_t j = 0; j < dist.size(); ++j)
      if (j != i) others *= factor[j];
    const double scale = -cfg.p * others * std::pow(dist[i], -cfg.p - 2.0);
    g += scale * gram.apply(ua - set.roots[i].active());
  }
  return g;
}

VecX deflated_update(const AssembledSystem& system, const VecX& d, double eta_val,
                     InnerSolver& solver, DeflatedUpdateInfo* info) {
  SolveStats stats;
  const VecX y = solver.solve(system, system.residual, &stats); // J_A^{-1} A
  const double s = d.dot(y);
  const double denom = 1.0 + s / eta_val;
  if (info) {
    info->krylov_iterations = stats.iterations;
    info->sherman_morrison_denominator = denom;
  }
  if (std::abs(denom) < 1e-14)
    throw SingularUpdateError("deflated_update: Sherman-Morrison denominator vanished");
  return (-1.0 / denom) * y;
}

} // namespace lc
