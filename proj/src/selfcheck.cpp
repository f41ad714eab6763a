#include "lcequil/selfcheck.hpp"

#include <cmath>
#include <random>

namespace lc {
namespace {

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

} // namespace

State random_state(const Problem& problem, int level, unsigned seed, double amplitude) {
  auto space = make_space(problem, level);
  State s(space);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const auto& sp = *space;
  for (int node = 0; node < sp.q2n; ++node) {
    s.u[sp.field_offset(0) + node] = 1.0 + amplitude * uni(rng);
    s.u[sp.field_offset(1) + node] = amplitude * uni(rng);
    s.u[sp.field_offset(2) + node] = amplitude * uni(rng);
    if (sp.has_phi) s.u[sp.phi_offset() + node] = amplitude * uni(rng);
  }
  for (int c = 0; c < sp.ncells; ++c)
    s.u[sp.lambda_offset() + c] = amplitude * uni(rng);
  if (problem.director_sides != DirichletSides::None || sp.has_phi)
    apply_boundary_values(s, problem);
  else
    s.sync_slaves();
  return s;
}

VecX random_direction(const Space& space, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  VecX w(space.n_active);
  for (int i = 0; i < space.n_active; ++i) w[i] = uni(rng);
  w /= w.norm();
  return w;
}

GradientCheck check_gradient(const Problem& problem, int level, int nstates,
                             int ndirs, unsigned seed) {
  GradientCheck out;
  out.worst_order = 1e30;
  const Model model = problem.model;
  for (int si = 0; si < nstates; ++si) {
    State u = random_state(problem, level, seed + 977 * si);
    const VecX r = assemble_residual(u, problem.params, model);
    for (int di = 0; di < ndirs; ++di) {
      const VecX w = random_direction(*u.space, seed + 131 * di + 7 * si);
      const double analytic = r.dot(w);
      auto fd = [&](double h) {
        State up = u, um = u;
        up.apply_update(w, h);
        um.apply_update(w, -h);
        return (lagrangian_value(up, problem.params, model) -
                lagrangian_value(um, problem.params, model)) /
               (2.0 * h);
      };
      out.max_rel_err = std::max(out.max_rel_err, rel_err(fd(1e-5), analytic));
      // Order estimate from a step pair where truncation still dominates
      // the floating-point noise floor.
      const double e2 = rel_err(fd(1e-2), analytic);
      const double e3 = rel_err(fd(1e-3), analytic);
      if (e3 > 1e-11)
        out.worst_order = std::min(out.worst_order, std::log10(e2 / e3));
    }
  }
  if (out.worst_order == 1e30) out.worst_order = 2.0;
  return out;
}

HessianCheck check_hessian(const Problem& problem, int level, int nstates,
                           int ndirs, unsigned seed) {
  HessianCheck out;
  const Model model = problem.model;
  for (int si = 0; si < nstates; ++si) {
    State u = random_state(problem, level, seed + 977 * si);
    const AssembledSystem sys = assemble_system(u, problem.params, model);
    for (int di = 0; di < ndirs; ++di) {
      const VecX w = random_direction(*u.space, seed + 131 * di + 7 * si + 3);
      const VecX jw = sys.jacobian * w;
      const double h = 1e-5;
      State up = u, um = u;
      up.apply_update(w, h);
      um.apply_update(w, -h);
      const VecX fd = (assemble_residual(up, problem.params, model) -
                       assemble_residual(um, problem.params, model)) /
                      (2.0 * h);
      out.max_rel_err = std::max(out.max_rel_err, (fd - jw).norm() / jw.norm());
    }
  }
  return out;
}

double check_sherman_morrison(const Problem& problem, int level, int nroots,
                              unsigned seed) {
  const State u = random_state(problem, level, seed);
  DeflationSet set;
  for (int i = 0; i < nroots; ++i)
    set.roots.push_back(random_state(problem, level, seed + 31 * (i + 1)));

  const GramOperator gram = build_gram(u.space);
  const DeflationConfig cfg{3.0, 1.0};
  const double ev = eta(gram, u, set, cfg);
  const VecX d = eta_gradient(gram, u, set, cfg);

  const AssembledSystem sys = assemble_system(u, problem.params, problem.model);

  LinearSolveConfig lcfg;
  lcfg.preconditioner = Preconditioner::Direct;
  lcfg.rel_tol = 1e-13;
  auto spaces = std::make_shared<SpaceCache>(problem);
  InnerSolver solver(lcfg, spaces);
  const VecX update = deflated_update(sys, d, ev, solver);

  // Dense oracle: explicit deflated Jacobian, direct solve.
  Eigen::MatrixXd jg = ev * Eigen::MatrixXd(sys.jacobian);
  jg.noalias() += sys.residual * d.transpose();
  const VecX oracle = jg.partialPivLu().solve(VecX(-ev * sys.residual));
  return (update - oracle).norm() / oracle.norm();
}

} // namespace lc
