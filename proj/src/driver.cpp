#include "lcequil/driver.hpp"

#include <numeric>

namespace lc {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Initial: return "initial";
    case Provenance::Continued: return "continued";
    case Provenance::Deflated: return "deflated";
  }
  return "unknown";
}

const SolutionRecord* RunReport::find(const std::string& id) const {
  for (const auto& s : solutions)
    if (s.id == id) return &s;
  return nullptr;
}

namespace {

LevelStats stats_from(const NewtonOutcome& out, double energy, double wu,
                      Provenance prov) {
  LevelStats st;
  st.energy = energy;
  st.newton_iters = out.iterations;
  st.status = out.status;
  st.provenance = prov;
  st.work_units = wu;
  if (!out.krylov_history.empty()) {
    st.avg_krylov =
        std::accumulate(out.krylov_history.begin(), out.krylov_history.end(), 0.0) /
        static_cast<double>(out.krylov_history.size());
    st.max_krylov =
        *std::max_element(out.krylov_history.begin(), out.krylov_history.end());
  }
  return st;
}

} // namespace

RunReport run_experiment(const ExperimentPreset& preset, int max_level,
                         const RunOptions& opts) {
  if (max_level < 0 || max_level > kMaxLevel)
    throw std::invalid_argument("run_experiment: levels out of range");
  preset.problem.validate();

  RunReport report;
  report.preset_name = preset.name;
  report.levels = max_level;

  auto spaces = std::make_shared<SpaceCache>(preset.problem);
  InnerSolver solver(opts.linear, spaces);
  const Problem& problem = preset.problem;

  auto track = [&](const NewtonOutcome& out) {
    report.total_newton_iters += out.iterations;
    for (int k : out.krylov_history)
      report.max_krylov_overall = std::max(report.max_krylov_overall, k);
  };

  int next_id = 0;
  auto fresh_id = [&next_id] { return "S" + std::to_string(++next_id); };

  for (int level = 0; level <= max_level; ++level) {
    const auto space = spaces->level(level);
    const GramOperator gram = build_gram(space);
    solver.bind_meter(&report.meter, max_level - level);
    auto wu_delta = [&, before = 0.0]() mutable {
      const double now = report.meter.work_units();
      const double d = now - before;
      before = now;
      return d;
    };
    wu_delta();

    // Continuation: undeflated solves on every known solution.
    if (level == 0) {
      const State seed = make_guess_state(preset.guesses.at(0), space, problem);
      const NewtonOutcome out =
          newton_solve(seed, problem, std::nullopt, preset.undeflated, opts.newton, solver);
      track(out);
      const double wu = wu_delta();
      if (out.status == NewtonStatus::Converged) {
        SolutionRecord rec;
        rec.id = fresh_id();
        rec.origin = Provenance::Initial;
        rec.discovery_level = 0;
        rec.discovered_from = preset.guesses.at(0).name;
        rec.state = out.state;
        rec.per_level[0] = stats_from(
            out, free_energy(out.state, problem.params, problem.model), wu,
            Provenance::Initial);
        report.solutions.push_back(std::move(rec));
      } else {
        auto& anon = report.anonymous[level];
        anon.newton_iters += out.iterations;
        anon.work_units += wu;
        anon.attempts += 1;
      }
    } else {
      for (auto& rec : report.solutions) {
        const NewtonOutcome out = newton_solve(rec.state, problem, std::nullopt,
                                               preset.undeflated, opts.newton, solver);
        track(out);
        const double wu = wu_delta();
        if (out.status == NewtonStatus::Converged) {
          rec.state = out.state;
        } else {
          // Retain the solution for further refinement, flagged.
          rec.continuation_warning = true;
          report.any_continuation_warning = true;
          if (out.status != NewtonStatus::Blowup) rec.state = out.state;
        }
        rec.per_level[level] = stats_from(
            out, free_energy(rec.state, problem.params, problem.model), wu,
            Provenance::Continued);
      }
    }

    // Discovery: deflated solves from the static guess library.
    for (const auto& guess : preset.guesses) {
      DeflationSet set;
      set.roots.reserve(report.solutions.size());
      for (const auto& rec : report.solutions) set.roots.push_back(rec.state);
      DeflationContext ctx{&set, preset.deflation, &gram};

      const State start = make_guess_state(guess, space, problem);
      const NewtonOutcome out = newton_solve(start, problem, ctx, preset.deflated,
                                             opts.newton, solver);
      track(out);
      const double wu = wu_delta();

      bool accepted = false;
      if (out.status == NewtonStatus::Converged) {
        bool distinct = true;
        for (const auto& rec : report.solutions)
          if (u_distance(gram, out.state, rec.state) <= kDistinctness) {
            distinct = false;
            break;
          }
        if (distinct) {
          SolutionRecord rec;
          rec.id = fresh_id();
          rec.origin = Provenance::Deflated;
          rec.discovery_level = level;
          rec.discovered_from = guess.name;
          rec.state = out.state;
          rec.per_level[level] = stats_from(
              out, free_energy(out.state, problem.params, problem.model), wu,
              Provenance::Deflated);
          report.solutions.push_back(std::move(rec));
          accepted = true;
        }
      }
      if (!accepted) {
        auto& anon = report.anonymous[level];
        anon.newton_iters += out.iterations;
        anon.work_units += wu;
        anon.attempts += 1;
      }
    }

    // Refine and interpolate the knowledge to the next level.
    if (level < max_level) {
      const auto fine = spaces->level(level + 1);
      for (auto& rec : report.solutions)
        rec.state = prolong(rec.state, fine, problem);
    }
  }
  return report;
}

} // namespace lc
