#pragma once

#include <map>

#include "lcequil/presets.hpp"

namespace lc {

enum class Provenance { Initial, Continued, Deflated };
const char* to_string(Provenance p);

/// Per-solution, per-level bookkeeping.
struct LevelStats {
  double energy = 0.0;
  int newton_iters = 0;
  NewtonStatus status = NewtonStatus::Converged;
  double avg_krylov = 0.0;
  int max_krylov = 0;
  double work_units = 0.0;
  Provenance provenance = Provenance::Continued;
};

struct SolutionRecord {
  std::string id;
  Provenance origin = Provenance::Initial;
  int discovery_level = 0;
  std::string discovered_from; // guess name
  State state;                 // on the current (finest-processed) level
  std::map<int, LevelStats> per_level;
  bool continuation_warning = false;

  double energy_at(int level) const { return per_level.at(level).energy; }
};

struct LevelAnonymous {
  long newton_iters = 0;
  double work_units = 0.0;
  int attempts = 0;
};

struct RunReport {
  std::string preset_name;
  int levels = 0; // finest level index
  std::vector<SolutionRecord> solutions;
  std::map<int, LevelAnonymous> anonymous; // failed/duplicate discovery solves
  WorkUnitMeter meter;
  long total_newton_iters = 0;
  int max_krylov_overall = 0;
  bool any_continuation_warning = false;

  const SolutionRecord* find(const std::string& id) const;
};

struct RunOptions {
  LinearSolveConfig linear;
  NewtonConfig newton;
};

/// Nested-iteration driver: per level, re-converge known solutions with
/// undeflated Newton, then run deflated discovery from the static guess
/// library against all currently known solutions, then refine and
/// interpolate. The first guess seeds the initial coarse-level solve.
RunReport run_experiment(const ExperimentPreset& preset, int max_level,
                         const RunOptions& opts = {});

} // namespace lc
