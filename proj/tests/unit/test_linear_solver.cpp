#include <doctest.h>

#include <random>

#include "lcequil/guesses.hpp"
#include "lcequil/multigrid.hpp"
#include "lcequil/presets.hpp"
#include "lcequil/selfcheck.hpp"

using namespace lc;

namespace {

AssembledSystem wrap(const SparseMat& A, const std::shared_ptr<const Space>& sp) {
  AssembledSystem sys;
  sys.jacobian = A;
  sys.space = sp;
  return sys;
}

} // namespace

TEST_SUITE("linear_solver") {

TEST_CASE("identity system converges in one iteration") {
  const auto preset = make_preset("tilt_twist");
  auto spaces = std::make_shared<SpaceCache>(preset.problem);
  const auto sp = spaces->level(0);

  SparseMat I(50, 50);
  I.setIdentity();
  LinearSolveConfig cfg;
  cfg.preconditioner = Preconditioner::None;
  InnerSolver solver(cfg, spaces);
  VecX b = VecX::LinSpaced(50, 1.0, 2.0);
  SolveStats stats;
  const VecX x = solver.solve(wrap(I, sp), b, &stats);
  CHECK(stats.iterations == 1);
  CHECK((x - b).norm() <= 1e-12);
}

TEST_CASE("direct preconditioner solves a random SPD system in one iteration") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> uni(-1, 1);
  Eigen::MatrixXd M(100, 100);
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j) M(i, j) = uni(rng);
  Eigen::MatrixXd spd = M * M.transpose() + 100.0 * Eigen::MatrixXd::Identity(100, 100);
  SparseMat A = spd.sparseView();

  const auto preset = make_preset("tilt_twist");
  auto spaces = std::make_shared<SpaceCache>(preset.problem);
  LinearSolveConfig cfg;
  cfg.preconditioner = Preconditioner::Direct;
  InnerSolver solver(cfg, spaces);
  VecX b(100);
  for (auto& v : b) v = uni(rng);
  SolveStats stats;
  const VecX x = solver.solve(wrap(A, spaces->level(0)), b, &stats);
  CHECK(stats.iterations == 1);
  CHECK((A * x - b).norm() / b.norm() <= 1e-10);
}

TEST_CASE("multigrid-preconditioned GMRES on the Freedericksz Newton system") {
  const auto preset = make_preset("freedericksz");
  auto spaces = std::make_shared<SpaceCache>(preset.problem);
  const auto sp = spaces->level(1); // 16x16
  const State s = make_guess_state(preset.guesses[0], sp, preset.problem);
  const auto sys = assemble_system(s, preset.problem.params, preset.problem.model);

  LinearSolveConfig cfg; // multigrid default
  InnerSolver solver(cfg, spaces);
  WorkUnitMeter meter;
  solver.bind_meter(&meter, 0);
  SolveStats stats;
  const VecX x = solver.solve(sys, VecX(-sys.residual), &stats);
  CHECK(stats.converged);
  CHECK(stats.rel_residual <= 1e-6);
  CHECK(stats.iterations >= 1);
  CHECK(stats.iterations <= 40); // typically ~10-13 on these systems
  CHECK(meter.counts.at(0) >= stats.iterations); // one V-cycle per application
  CHECK((sys.jacobian * x + sys.residual).norm() / sys.residual.norm() <= 1e-6);
}

TEST_CASE("galerkin identity on every level pair") {
  const auto preset = make_preset("freedericksz");
  auto spaces = std::make_shared<SpaceCache>(preset.problem);
  const auto sp = spaces->level(2);
  const State s = make_guess_state(preset.guesses[0], sp, preset.problem);
  const auto sys = assemble_system(s, preset.problem.params, preset.problem.model);

  LinearSolveConfig cfg;
  const MgHierarchy h = build_hierarchy(sys, *spaces, cfg);
  REQUIRE(h.levels.size() == 3);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uni(-1, 1);
  for (std::size_t k = 0; k + 1 < h.levels.size(); ++k) {
    const auto& P = h.levels[k + 1].P;
    VecX v(P.cols());
    for (auto& x : v) x = uni(rng);
    const VecX lhs = h.levels[k + 1].A * v;
    const VecX rhs = P.transpose() * (h.levels[k].A * (P * v));
    CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
  }
}

TEST_CASE("v-cycle: zero input stays zero; meter counts top-level cycles") {
  const auto preset = make_preset("tilt_twist");
  auto spaces = std::make_shared<SpaceCache>(preset.problem);
  const auto sp = spaces->level(1);
  const State s = make_guess_state(preset.guesses[0], sp, preset.problem);
  const auto sys = assemble_system(s, preset.problem.params, preset.problem.model);
  LinearSolveConfig cfg;
  const MgHierarchy h = build_hierarchy(sys, *spaces, cfg);

  VecX x = VecX::Zero(sys.jacobian.rows());
  h.vcycle(0, VecX::Zero(sys.jacobian.rows()), x);
  CHECK(x.norm() == 0.0);

  WorkUnitMeter meter;
  meter.add(0);
  CHECK(meter.work_units() == 1.0);
}

TEST_CASE("work unit weighting") {
  WorkUnitMeter m;
  CHECK(m.work_units() == 0.0);
  m.add(1, 4);
  CHECK(m.work_units() == doctest::Approx(1.0));
  WorkUnitMeter m2;
  m2.add(0, 1);
  m2.add(2, 8);
  CHECK(m2.work_units() == doctest::Approx(1.5));
}

TEST_CASE("two-level cycle contracts the 1D Laplacian model error") {
  // Classical model problem: -u'' on a unit interval, linear elements.
  const int n = 31; // interior points, h = 1/32
  const double h = 1.0 / 32.0;
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0 / (h * h));
    if (i > 0) t.emplace_back(i, i - 1, -1.0 / (h * h));
    if (i + 1 < n) t.emplace_back(i, i + 1, -1.0 / (h * h));
  }
  SparseMat A(n, n);
  A.setFromTriplets(t.begin(), t.end());

  const int nc = 15;
  std::vector<Triplet> tp;
  for (int j = 0; j < nc; ++j) { // standard 1D interpolation
    tp.emplace_back(2 * j + 1, j, 1.0);
    tp.emplace_back(2 * j, j, 0.5);
    tp.emplace_back(2 * j + 2, j, 0.5);
  }
  SparseMat P(n, nc);
  P.setFromTriplets(tp.begin(), tp.end());

  MgHierarchy hier;
  hier.levels.push_back(make_mg_level(A, n, 1.5));
  SparseMat Ac = (P.transpose() * A * P).pruned();
  MgLevel coarse = make_mg_level(Ac, nc, 1.5);
  coarse.P = P;
  hier.levels.push_back(std::move(coarse));
  hier.coarsest_lu = std::make_shared<Eigen::SparseLU<SparseMat>>();
  hier.coarsest_lu->compute(hier.levels.back().A);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> uni(-1, 1);
  VecX xstar(n), b;
  for (auto& v : xstar) v = uni(rng);
  b = A * xstar;
  VecX x = VecX::Zero(n);
  double prev = (xstar - x).norm();
  for (int cycle = 0; cycle < 4; ++cycle) {
    hier.vcycle(0, b, x);
    const double err = (xstar - x).norm();
    CHECK(err < 0.5 * prev); // contraction factor below one half
    prev = err;
  }
}

TEST_CASE("braess-sarazin with no multiplier block is damped Jacobi") {
  SparseMat A(3, 3);
  std::vector<Triplet> t{{0, 0, 2.0}, {1, 1, 4.0}, {2, 2, 8.0}, {0, 1, 1.0}, {1, 0, 1.0}};
  A.setFromTriplets(t.begin(), t.end());
  VecX b(3);
  b << 3.0, 8.0, 16.0;
  VecX x = VecX::Zero(3);
  const double tpar = 1.5;
  braess_sarazin_relax(A, 3, b, x, tpar); // lambda_begin == rows
  CHECK(x[0] == doctest::Approx(b[0] / (tpar * 2.0)));
  CHECK(x[1] == doctest::Approx(b[1] / (tpar * 4.0)));
  CHECK(x[2] == doctest::Approx(b[2] / (tpar * 8.0)));
}

TEST_CASE("braess-sarazin 3x3 hand example: exact Schur kills the constraint residual") {
  SparseMat A(3, 3);
  std::vector<Triplet> t{{0, 0, 4.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0},
                         {0, 2, 1.0}, {1, 2, 2.0}, {2, 0, 1.0}, {2, 1, 2.0}};
  A.setFromTriplets(t.begin(), t.end());
  VecX b(3);
  b << 6.0, 9.0, 3.0;
  VecX x = VecX::Zero(3);
  braess_sarazin_relax(A, 2, b, x, 1.5);

  // Hand values: tD = diag(6, 4.5); S = 19/18; dl = 36/19; du = (13/19, 22/19).
  CHECK(x[0] == doctest::Approx(13.0 / 19.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(22.0 / 19.0).epsilon(1e-14));
  CHECK(x[2] == doctest::Approx(36.0 / 19.0).epsilon(1e-14));
  const VecX r = b - A * x;
  CHECK(std::abs(r[2]) <= 1e-14); // multiplier residual eliminated exactly
}

TEST_CASE("stokes-like saddle system: steady residual contraction per cycle") {
  // One-constant director block (a vector Laplacian under full Dirichlet
  // data) plus the P0 multiplier coupling at n = (1,0,0): the production
  // analogue of a Stokes saddle system. The per-cycle reduction frozen here
  // is the measured rate of the t*diag(A) relaxation on Q2/P0 (about 2.3x;
  // a single damped-Jacobi sweep on biquadratic elements smooths no faster).
  auto preset = make_preset("disclination");
  preset.problem.params = MaterialParams{1.0, 1.0, 1.0};
  auto spaces = std::make_shared<SpaceCache>(preset.problem);
  const auto sp = spaces->level(2); // 32x32
  State s(sp);
  for (int node = 0; node < sp->q2n; ++node)
    s.u[sp->field_offset(0) + node] = 1.0;
  const auto sys = assemble_system(s, preset.problem.params, preset.problem.model);

  LinearSolveConfig cfg;
  const MgHierarchy h = build_hierarchy(sys, *spaces, cfg);
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> uni(-1, 1);
  VecX xstar(sys.jacobian.rows());
  for (auto& v : xstar) v = uni(rng);
  const VecX b = sys.jacobian * xstar;
  VecX x = VecX::Zero(b.size());
  double prev = b.norm();
  for (int cycle = 0; cycle < 6; ++cycle) {
    h.vcycle(0, b, x);
    const double res = (b - sys.jacobian * x).norm();
    if (cycle >= 1) CHECK(res <= prev / 2.0);
    prev = res;
  }
  CHECK(prev <= 2e-2 * b.norm());
}

TEST_CASE("krylov exhaustion raises a solver stall") {
  const auto preset = make_preset("freedericksz");
  auto spaces = std::make_shared<SpaceCache>(preset.problem);
  const auto sp = spaces->level(0);
  const State s = make_guess_state(preset.guesses[0], sp, preset.problem);
  const auto sys = assemble_system(s, preset.problem.params, preset.problem.model);
  LinearSolveConfig cfg;
  cfg.preconditioner = Preconditioner::None;
  cfg.max_krylov = 3; // far too few for an unpreconditioned saddle system
  InnerSolver solver(cfg, spaces);
  CHECK_THROWS_AS(solver.solve(sys, VecX(-sys.residual)), SolverStallError);
}

} // TEST_SUITE
