#include <doctest.h>

#include "lcequil/presets.hpp"
#include "lcequil/selfcheck.hpp"

using namespace lc;

TEST_SUITE("newton") {

TEST_CASE("damping schedules clamp to [0.1, 1.0]") {
  DampingSchedule down{1.0, 0.5, DampingSchedule::Mode::Decreasing};
  CHECK(down.effective(0) == 1.0);
  CHECK(down.effective(1) == 0.5);
  CHECK(down.effective(2) == doctest::Approx(0.1));
  CHECK(down.effective(5) == doctest::Approx(0.1));
  DampingSchedule up{0.4, 0.2, DampingSchedule::Mode::Increasing};
  CHECK(up.effective(0) == doctest::Approx(0.4));
  CHECK(up.effective(2) == doctest::Approx(0.8));
  CHECK(up.effective(3) == doctest::Approx(1.0));
  CHECK(up.effective(6) == doctest::Approx(1.0));
}

TEST_CASE("a converged start returns immediately") {
  const auto preset = make_preset("freedericksz");
  auto spaces = std::make_shared<SpaceCache>(preset.problem);
  const auto sp = spaces->level(0);
  // The uniform rest state is an exact discrete solution.
  State s = make_guess_state(
      Guess{"rest", [](double, double) { return Vec3(1, 0, 0); }, nullptr}, sp,
      preset.problem);
  InnerSolver solver(LinearSolveConfig{}, spaces);
  const auto out = newton_solve(s, preset.problem, std::nullopt, preset.undeflated,
                                NewtonConfig{}, solver);
  CHECK(out.status == NewtonStatus::Converged);
  CHECK(out.iterations <= 1);
}

TEST_CASE("undeflated solve lands on the Freedericksz rest energy") {
  const auto preset = make_preset("freedericksz");
  auto spaces = std::make_shared<SpaceCache>(preset.problem);
  const auto sp = spaces->level(1);
  const State s = make_guess_state(preset.guesses[0], sp, preset.problem);
  InnerSolver solver(LinearSolveConfig{}, spaces);
  const auto out = newton_solve(s, preset.problem, std::nullopt, preset.undeflated,
                                NewtonConfig{}, solver);
  REQUIRE(out.status == NewtonStatus::Converged);
  CHECK(free_energy(out.state, preset.problem.params, Model::Nematic) ==
        doctest::Approx(-6.04796115).epsilon(1e-6));
  CHECK(out.residual_history.back() <= 1e-4);
}

TEST_CASE("deflating the rest state uncovers a tilted minimizer") {
  const auto preset = make_preset("freedericksz");
  auto spaces = std::make_shared<SpaceCache>(preset.problem);
  const auto sp = spaces->level(0);
  InnerSolver solver(LinearSolveConfig{}, spaces);

  const State rest = make_guess_state(
      Guess{"rest", [](double, double) { return Vec3(1, 0, 0); }, nullptr}, sp,
      preset.problem);
  const auto base = newton_solve(rest, preset.problem, std::nullopt,
                                 preset.undeflated, NewtonConfig{}, solver);
  REQUIRE(base.status == NewtonStatus::Converged);

  const GramOperator gram = build_gram(sp);
  DeflationSet set;
  set.roots.push_back(base.state);
  DeflationContext ctx{&set, preset.deflation, &gram};
  const State g = make_guess_state(preset.guesses[0], sp, preset.problem);
  const auto tilted = newton_solve(g, preset.problem, ctx, preset.deflated,
                                   NewtonConfig{}, solver);
  REQUIRE(tilted.status == NewtonStatus::Converged);
  const double e = free_energy(tilted.state, preset.problem.params, Model::Nematic);
  CHECK(e < -6.6); // well below the rest energy, near the -6.778 minimizer
  CHECK(e > -6.9);
  CHECK(u_distance(gram, tilted.state, base.state) > kDistinctness);
}

TEST_CASE("starting a deflated run at the deflated root reports at_known_root") {
  const auto preset = make_preset("freedericksz");
  auto spaces = std::make_shared<SpaceCache>(preset.problem);
  const auto sp = spaces->level(0);
  InnerSolver solver(LinearSolveConfig{}, spaces);
  const State rest = make_guess_state(
      Guess{"rest", [](double, double) { return Vec3(1, 0, 0); }, nullptr}, sp,
      preset.problem);
  const auto base = newton_solve(rest, preset.problem, std::nullopt,
                                 preset.undeflated, NewtonConfig{}, solver);
  REQUIRE(base.status == NewtonStatus::Converged);
  const GramOperator gram = build_gram(sp);
  DeflationSet set;
  set.roots.push_back(base.state);
  DeflationContext ctx{&set, preset.deflation, &gram};
  const auto out = newton_solve(base.state, preset.problem, ctx, preset.deflated,
                                NewtonConfig{}, solver);
  CHECK(out.status == NewtonStatus::AtKnownRoot);
  CHECK(out.iterations == 0);
}

TEST_CASE("gross unit-length violation stops as blowup") {
  const auto preset = make_preset("tilt_twist");
  auto spaces = std::make_shared<SpaceCache>(preset.problem);
  const auto sp = spaces->level(0);
  const State s = make_guess_state(
      Guess{"far", [](double, double) { return Vec3(4.0, 0, 0); }, nullptr}, sp,
      preset.problem);
  InnerSolver solver(LinearSolveConfig{}, spaces);
  const auto out = newton_solve(s, preset.problem, std::nullopt, preset.undeflated,
                                NewtonConfig{}, solver);
  CHECK(out.status == NewtonStatus::Blowup);
}

TEST_CASE("quadratic convergence near the rest solution") {
  const auto preset = make_preset("freedericksz");
  auto spaces = std::make_shared<SpaceCache>(preset.problem);
  const auto sp = spaces->level(0);
  State s = make_guess_state(
      Guess{"rest", [](double, double) { return Vec3(1, 0, 0); }, nullptr}, sp,
      preset.problem);
  // Small smooth perturbation off the uniform branch.
  for (int ix = 0; ix < sp->mesh.q2_side(); ++ix)
    for (int iy = 0; iy < sp->mesh.q2_side(); ++iy) {
      const double y = sp->mesh.node_y(iy);
      s.u[sp->field_offset(1) + sp->node_index(ix, iy)] +=
          0.05 * std::sin(M_PI * y);
    }
  apply_boundary_values(s, preset.problem);

  LinearSolveConfig lcfg;
  lcfg.preconditioner = Preconditioner::Direct;
  lcfg.rel_tol = 1e-12;
  NewtonConfig ncfg;
  ncfg.fooc_tol = 1e-9; // observe the asymptotic tail above the solve floor
  InnerSolver solver(lcfg, spaces);
  const auto out = newton_solve(s, preset.problem, std::nullopt, preset.undeflated,
                                ncfg, solver);
  REQUIRE(out.status == NewtonStatus::Converged);
  const auto& r = out.residual_history;
  REQUIRE(r.size() >= 4);
  int windows = 0;
  for (std::size_t k = 1; k < r.size(); ++k) {
    if (r[k - 1] > 1e-1 || r[k] < 1e-12) continue; // pre-asymptotic / floor
    const double C = r[k] / (r[k - 1] * r[k - 1]);
    CHECK(C < 1e3); // bounded quadratic-convergence constant
    ++windows;
  }
  CHECK(windows >= 3);
}

TEST_CASE("reflected guesses give energy-degenerate solutions") {
  const auto preset = make_preset("tilt_twist");
  auto spaces = std::make_shared<SpaceCache>(preset.problem);
  const auto sp = spaces->level(0);
  double energies[2];
  for (int i = 0; i < 2; ++i) {
    InnerSolver solver(LinearSolveConfig{}, spaces); // independent runs
    const State s = make_guess_state(preset.guesses[i], sp, preset.problem);
    const auto out = newton_solve(s, preset.problem, std::nullopt, preset.undeflated,
                                  NewtonConfig{}, solver);
    REQUIRE(out.status == NewtonStatus::Converged);
    energies[i] = free_energy(out.state, preset.problem.params, Model::Nematic);
  }
  CHECK(std::abs(energies[0] - energies[1]) <= 1e-8);
}

} // TEST_SUITE
