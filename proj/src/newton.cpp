#include "lcequil/newton.hpp"

namespace lc {

const char* to_string(NewtonStatus s) {
  switch (s) {
    case NewtonStatus::Converged: return "converged";
    case NewtonStatus::MaxIters: return "max_iters";
    case NewtonStatus::Blowup: return "blowup";
    case NewtonStatus::SolverStall: return "solver_stall";
    case NewtonStatus::AtKnownRoot: return "at_known_root";
  }
  return "unknown";
}

NewtonOutcome newton_solve(const State& initial, const Problem& problem,
                           const std::optional<DeflationContext>& deflation,
                           const DampingSchedule& schedule, const NewtonConfig& cfg,
                           InnerSolver& solver) {
  NewtonOutcome out{NewtonStatus::MaxIters, initial, 0, {}, {}, 1.0};
  State& u = out.state;
  const double omega = schedule.effective(u.space->mesh.level);
  out.omega_used = omega;
  const Model model = problem.model;
  const MaterialParams& mp = problem.params;

  for (int it = 0; it <= cfg.max_iters; ++it) {
    // A deflated iterate sitting on a known root is a discovery failure, not
    // a converged solve.
    if (deflation && !deflation->set->empty()) {
      for (const auto& dist :
           root_distances(*deflation->gram, u, *deflation->set))
        if (dist <= kRootCoincidence) {
          out.status = NewtonStatus::AtKnownRoot;
          return out;
        }
    }
    AssembledSystem sys = assemble_system(u, mp, model);
    const double rnorm = sys.residual.norm();
    out.residual_history.push_back(rnorm);
    if (rnorm <= cfg.fooc_tol) {
      out.status = NewtonStatus::Converged;
      return out;
    }
    if (unit_length_violation(u) > cfg.blowup_mean_length) {
      out.status = NewtonStatus::Blowup;
      return out;
    }
    if (it == cfg.max_iters) break;

    VecX delta;
    SolveStats stats;
    try {
      if (deflation && !deflation->set->empty()) {
        const double ev = eta(*deflation->gram, u, *deflation->set, deflation->cfg);
        const VecX d =
            eta_gradient(*deflation->gram, u, *deflation->set, deflation->cfg);
        DeflatedUpdateInfo info;
        delta = deflated_update(sys, d, ev, solver, &info);
        stats.iterations = info.krylov_iterations;
      } else {
        delta = solver.solve(sys, VecX(-sys.residual), &stats);
      }
    } catch (const SingularDeflationError&) {
      out.status = NewtonStatus::AtKnownRoot;
      return out;
    } catch (const SingularUpdateError&) {
      out.status = NewtonStatus::SolverStall;
      return out;
    } catch (const SolverStallError&) {
      out.status = NewtonStatus::SolverStall;
      return out;
    }
    out.krylov_history.push_back(stats.iterations);

    u.apply_update(delta, omega);
    u.sync_slaves();
    ++out.iterations;
  }
  out.status = NewtonStatus::MaxIters;
  return out;
}

} // namespace lc
