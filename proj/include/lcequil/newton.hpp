#pragma once

#include <optional>

#include "lcequil/deflation.hpp"

namespace lc {

struct DampingSchedule {
  enum class Mode { Increasing, Decreasing };
  double omega0 = 1.0;
  double delta = 0.0;
  Mode mode = Mode::Increasing;
  double min_omega = 0.1;
  double max_omega = 1.0;

  double effective(int level) const {
    const double w = mode == Mode::Increasing ? omega0 + level * delta
                                              : omega0 - level * delta;
    return std::clamp(w, min_omega, max_omega);
  }
};

struct NewtonConfig {
  double fooc_tol = 1e-4;         // l2 norm of the undeflated residual
  int max_iters = 100;
  double blowup_mean_length = 3.0;
};

enum class NewtonStatus { Converged, MaxIters, Blowup, SolverStall, AtKnownRoot };

const char* to_string(NewtonStatus s);

struct NewtonOutcome {
  NewtonStatus status = NewtonStatus::MaxIters;
  State state;
  int iterations = 0;
  std::vector<double> residual_history; // undeflated FOOC norms, per check
  std::vector<int> krylov_history;
  double omega_used = 1.0;
};

struct DeflationContext {
  const DeflationSet* set = nullptr;
  DeflationConfig cfg;
  const GramOperator* gram = nullptr;
};

/// Damped Newton iteration. Convergence is always measured on the undeflated
/// first-order optimality residual; deflated steps come from the
/// Sherman-Morrison update around the same inner solver.
NewtonOutcome newton_solve(const State& initial, const Problem& problem,
                           const std::optional<DeflationContext>& deflation,
                           const DampingSchedule& schedule, const NewtonConfig& cfg,
                           InnerSolver& solver);

} // namespace lc
