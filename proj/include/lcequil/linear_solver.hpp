#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lcequil/forms.hpp"
#include "lcequil/space.hpp"

namespace lc {

enum class Preconditioner { Multigrid, Direct, None };

struct LinearSolveConfig {
  double rel_tol = 1e-6; // residual ratio against the zero initial guess
  int max_krylov = 200;
  Preconditioner preconditioner = Preconditioner::Multigrid;
  int pre_sweeps = 1;
  int post_sweeps = 1;
  double bs_t = 1.5; // diagonal scaling of the Braess-Sarazin primal block
  // Setup is reused across solves until a solve needs more Krylov steps than
  // this; correctness is unaffected since GMRES iterates on the exact matrix.
  int refresh_iter_threshold = 20;
};

/// V-cycle counters per coarsening distance from the finest mesh of a run;
/// the weighted total is the fine-grid-equivalent work.
struct WorkUnitMeter {
  std::vector<long> counts;

  void add(int distance, long n = 1) {
    if (distance >= static_cast<int>(counts.size())) counts.resize(distance + 1, 0);
    counts[distance] += n;
  }
  double work_units() const {
    double wu = 0.0, w = 1.0;
    for (long c : counts) {
      wu += w * static_cast<double>(c);
      w *= 0.25;
    }
    return wu;
  }
};

struct SolveStats {
  int iterations = 0;
  bool converged = false;
  double rel_residual = 0.0;
};

class SolverStallError : public std::runtime_error {
 public:
  explicit SolverStallError(const std::string& what) : std::runtime_error(what) {}
};

/// Inner solver for Newton systems: right-preconditioned GMRES with a
/// geometric-multigrid or sparse-direct preconditioner. One instance serves
/// both the undeflated and deflated updates of a Newton run.
class InnerSolver {
 public:
  InnerSolver(LinearSolveConfig cfg, std::shared_ptr<SpaceCache> spaces);
  ~InnerSolver();

  InnerSolver(const InnerSolver&) = delete;
  InnerSolver& operator=(const InnerSolver&) = delete;

  /// Meter V-cycles at the given coarsening distance from the run's finest
  /// mesh. Pass nullptr to stop metering.
  void bind_meter(WorkUnitMeter* meter, int distance);

  /// Solve system.jacobian * x = rhs to the configured relative tolerance.
  /// Throws SolverStallError when max_krylov is exhausted.
  VecX solve(const AssembledSystem& system, const VecX& rhs, SolveStats* stats = nullptr);

  void invalidate(); // force preconditioner setup on the next solve
  const LinearSolveConfig& config() const { return cfg_; }
  long solve_count() const { return n_solves_; }

 private:
  struct Impl;
  LinearSolveConfig cfg_;
  std::shared_ptr<SpaceCache> spaces_;
  std::unique_ptr<Impl> impl_;
  WorkUnitMeter* meter_ = nullptr;
  int meter_distance_ = 0;
  long n_solves_ = 0;
};

} // namespace lc
