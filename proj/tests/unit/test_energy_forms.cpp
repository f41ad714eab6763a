#include <doctest.h>

#include <random>

#include "lcequil/presets.hpp"
#include "lcequil/quadrature.hpp"
#include "lcequil/selfcheck.hpp"

using namespace lc;

namespace {

Problem elastic_problem(double K1, double K2, double K3, bool periodic = false) {
  Problem p;
  p.model = Model::Nematic;
  p.periodic_x = periodic;
  p.director_sides = DirichletSides::None;
  p.params.K1 = K1;
  p.params.K2 = K2;
  p.params.K3 = K3;
  return p;
}

State uniform_director(const std::shared_ptr<const Space>& sp, const Vec3& n) {
  State s(sp);
  for (int node = 0; node < sp->q2n; ++node)
    for (int c = 0; c < 3; ++c) s.u[sp->field_offset(c) + node] = n[c];
  s.sync_slaves();
  return s;
}

// Test-side quadrature of a pointwise density over a state.
template <typename F>
double integrate(const State& s, F&& density) {
  const auto& sp = *s.space;
  const auto& tab = q2_shape_table_3x3();
  const double h = sp.mesh.cell_width(), inv_h = 1.0 / h;
  double total = 0.0;
  for (int cx = 0; cx < sp.mesh.cells_per_side; ++cx)
    for (int cy = 0; cy < sp.mesh.cells_per_side; ++cy) {
      int nodes[9];
      for (int l = 0; l < 9; ++l)
        nodes[l] = sp.node_index(2 * cx + l / 3, 2 * cy + l % 3);
      for (std::size_t q = 0; q < tab.rule.points.size(); ++q) {
        Vec3 n = Vec3::Zero(), nx = Vec3::Zero(), ny = Vec3::Zero();
        for (int c = 0; c < 3; ++c)
          for (int l = 0; l < 9; ++l) {
            const double cl = s.u[sp.field_offset(c) + nodes[l]];
            n[c] += tab.val[q][l] * cl;
            nx[c] += tab.dx[q][l] * inv_h * cl;
            ny[c] += tab.dy[q][l] * inv_h * cl;
          }
        total += tab.rule.points[q].w * h * h * density(n, nx, ny);
      }
    }
  return total;
}

} // namespace

TEST_SUITE("energy_forms") {

TEST_CASE("uniform director has zero elastic energy and residual") {
  const Problem p = elastic_problem(1.0, 3.0, 1.2);
  const auto sp = make_space(p, 0);
  const State s = uniform_director(sp, Vec3(1, 0, 0));
  CHECK(free_energy(s, p.params, p.model) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(assemble_residual(s, p.params, p.model).norm() <= 1e-12);
}

TEST_CASE("cholesteric planar uniform state reports the twist penalty") {
  Problem p = elastic_problem(1.0, 3.0, 1.2, true);
  p.model = Model::Cholesteric;
  p.params.t0 = -2.0 * M_PI;
  const auto sp = make_space(p, 0);
  const State s =
      uniform_director(sp, Vec3(std::cos(M_PI / 12), std::sin(M_PI / 12), 0));
  // 1/2 K2 t0^2 |Omega| = 6 pi^2 ~ 59.218
  CHECK(free_energy(s, p.params, p.model) ==
        doctest::Approx(6.0 * M_PI * M_PI).epsilon(1e-12));
}

TEST_CASE("cholesteric helix ansatz is near the zero ground state") {
  Problem p = elastic_problem(1.0, 3.0, 1.2, true);
  p.model = Model::Cholesteric;
  p.params.t0 = -2.0 * M_PI;
  const double tau = p.params.t0;
  for (int level : {1, 2}) {
    const auto sp = make_space(p, level);
    State s(sp);
    for (int ix = 0; ix < sp->mesh.q2_side(); ++ix)
      for (int iy = 0; iy < sp->mesh.q2_side(); ++iy) {
        const double y = sp->mesh.node_y(iy);
        const int node = sp->node_index(ix, iy);
        s.u[sp->field_offset(0) + node] = std::cos(tau * y);
        s.u[sp->field_offset(2) + node] = -std::sin(tau * y);
      }
    s.sync_slaves();
    const double e = free_energy(s, p.params, p.model);
    CHECK(e >= 0.0);
    CHECK(e <= (level == 1 ? 1e-2 : 1e-3)); // interpolation error only
  }
}

TEST_CASE("freedericksz rest state: exact energy, zero residual") {
  const auto preset = make_preset("freedericksz");
  const auto sp = make_space(preset.problem, 1);
  State s = uniform_director(sp, Vec3(1, 0, 0));
  for (int ix = 0; ix < sp->mesh.q2_side(); ++ix)
    for (int iy = 0; iy < sp->mesh.q2_side(); ++iy)
      s.u[sp->phi_offset() + sp->node_index(ix, iy)] =
          preset.problem.params.V * sp->mesh.node_y(iy);
  s.sync_slaves();
  const auto& mp = preset.problem.params;
  const double expected = -0.5 * mp.eps0 * mp.eps_perp * mp.V * mp.V;
  CHECK(free_energy(s, mp, Model::Nematic) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(-6.048).epsilon(2e-5)); // 3-decimal reference value
  CHECK(assemble_residual(s, mp, Model::Nematic).norm() <= 1e-10);
}

TEST_CASE("violated constraint shows up in the multiplier residual") {
  const Problem p = elastic_problem(1.0, 3.0, 1.2);
  const auto sp = make_space(p, 0);
  const State s = uniform_director(sp, Vec3(2, 0, 0));
  const VecX r = assemble_residual(s, p.params, p.model);
  const double cell_area = sp->mesh.cell_width() * sp->mesh.cell_width();
  for (int cell = 0; cell < sp->ncells; ++cell) {
    const int row = sp->active_of[sp->lambda_offset() + cell];
    CHECK(r[row] == doctest::Approx(3.0 * cell_area).epsilon(1e-12));
  }
}

TEST_CASE("unit_length_violation means |n| over nodes") {
  const Problem p = elastic_problem(1, 1, 1);
  const auto sp = make_space(p, 0);
  CHECK(unit_length_violation(uniform_director(sp, Vec3(1, 0, 0))) ==
        doctest::Approx(1.0));
  CHECK(unit_length_violation(uniform_director(sp, Vec3(3, 0, 0))) ==
        doctest::Approx(3.0));
  const double c = 2.0 / std::sqrt(3.0);
  CHECK(unit_length_violation(uniform_director(sp, Vec3(c, c, c))) ==
        doctest::Approx(2.0));
}

TEST_CASE("gradient matches finite differences of the Lagrangian") {
  for (const char* name : {"tilt_twist", "freedericksz", "cholesteric"}) {
    const auto preset = make_preset(name);
    const auto g = check_gradient(preset.problem, 0, 2, 4, 2024);
    CAPTURE(name);
    CHECK(g.max_rel_err <= 1e-6);
    CHECK(g.worst_order >= 1.5); // second-order central differences
  }
}

TEST_CASE("hessian action matches finite differences of the residual") {
  for (const char* name : {"tilt_twist", "freedericksz", "cholesteric"}) {
    const auto preset = make_preset(name);
    const auto h = check_hessian(preset.problem, 0, 2, 4, 4048);
    CAPTURE(name);
    CHECK(h.max_rel_err <= 1e-5);
  }
}

TEST_CASE("hessian is symmetric with the block zero pattern") {
  for (const char* name : {"freedericksz", "cholesteric"}) {
    const auto preset = make_preset(name);
    const State s = random_state(preset.problem, 0, 99);
    const auto sys = assemble_system(s, preset.problem.params, preset.problem.model);
    const SparseMat diff = SparseMat(sys.jacobian.transpose()) - sys.jacobian;
    double amax = 0.0, dmax = 0.0;
    for (int k = 0; k < sys.jacobian.outerSize(); ++k)
      for (SparseMat::InnerIterator it(sys.jacobian, k); it; ++it)
        amax = std::max(amax, std::abs(it.value()));
    for (int k = 0; k < diff.outerSize(); ++k)
      for (SparseMat::InnerIterator it(diff, k); it; ++it)
        dmax = std::max(dmax, std::abs(it.value()));
    CHECK(dmax <= 1e-12 * amax);

    // lambda-lambda and phi-lambda blocks are identically zero.
    const auto& sp = *s.space;
    const int lb = sp.lambda_active_begin();
    int phi_begin = lb;
    if (sp.has_phi)
      for (int d = sp.phi_offset(); d < sp.lambda_offset(); ++d)
        if (sp.active_of[d] >= 0) {
          phi_begin = sp.active_of[d];
          break;
        }
    for (int k = 0; k < sys.jacobian.outerSize(); ++k)
      for (SparseMat::InnerIterator it(sys.jacobian, k); it; ++it) {
        if (it.row() >= lb && it.col() >= lb) CHECK(it.value() == 0.0);
        if (sp.has_phi && it.value() != 0.0) {
          const bool row_phi = it.row() >= phi_begin && it.row() < lb;
          const bool col_lam = it.col() >= lb;
          const bool col_phi = it.col() >= phi_begin && it.col() < lb;
          const bool row_lam = it.row() >= lb;
          CHECK_FALSE((row_phi && col_lam));
          CHECK_FALSE((row_lam && col_phi));
        }
      }
  }
}

TEST_CASE("multiplier coupling at the rest state touches only n1") {
  const Problem p = elastic_problem(1.0, 3.0, 1.2);
  const auto sp = make_space(p, 0);
  const State s = uniform_director(sp, Vec3(1, 0, 0));
  const auto sys = assemble_system(s, p.params, p.model);
  const int lb = sp->lambda_active_begin();
  const int n2_begin = sp->active_of[sp->field_offset(1)];
  for (int k = 0; k < sys.jacobian.outerSize(); ++k)
    for (SparseMat::InnerIterator it(sys.jacobian, k); it; ++it)
      if (it.row() >= lb && it.col() >= n2_begin && it.col() < lb)
        CHECK(it.value() == 0.0); // n2, n3 carry no constraint coupling here
}

TEST_CASE("Z-tensor identity validates the rewritten twist-bend term") {
  const Problem p = elastic_problem(1.4, 0.7, 1.9);
  const State s = random_state(p, 0, 31337, 0.5);
  const double kappa = p.params.K2 / p.params.K3;

  const double explicit_z = integrate(s, [&](const Vec3& n, const Vec3& nx, const Vec3& ny) {
    const Vec3 c(ny[2], -nx[2], nx[1] - ny[0]);
    const Vec3 zc = c - (1.0 - kappa) * n * n.dot(c);
    return p.params.K3 * zc.dot(c);
  });
  const double div_part = integrate(s, [&](const Vec3&, const Vec3& nx, const Vec3& ny) {
    const double d = nx[0] + ny[1];
    return p.params.K1 * d * d;
  });
  const double production = 2.0 * free_energy(s, p.params, p.model);
  CHECK(std::abs(production - div_part - explicit_z) <=
        1e-12 * std::abs(explicit_z));
}

TEST_CASE("one-constant reduction") {
  const double K = 1.7;
  const Problem p = elastic_problem(K, K, K);
  const auto sp = make_space(p, 0);
  State s(sp);
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> uni(0.0, 2 * M_PI);
  for (int node = 0; node < sp->q2n; ++node) {
    const double th = uni(rng), ph = uni(rng);
    s.u[sp->field_offset(0) + node] = std::sin(th) * std::cos(ph);
    s.u[sp->field_offset(1) + node] = std::sin(th) * std::sin(ph);
    s.u[sp->field_offset(2) + node] = std::cos(th);
  }
  const double expected =
      0.5 * K * integrate(s, [](const Vec3&, const Vec3& nx, const Vec3& ny) {
        const double d = nx[0] + ny[1];
        const Vec3 c(ny[2], -nx[2], nx[1] - ny[0]);
        return d * d + c.squaredNorm();
      });
  CHECK(free_energy(s, p.params, p.model) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("planar frame rotation leaves the K1==K3 elastic energy invariant") {
  const Problem p = elastic_problem(1.1, 0.8, 1.1);
  const auto sp = make_space(p, 0);
  State s(sp);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int node = 0; node < sp->q2n; ++node) {
    s.u[sp->field_offset(0) + node] = 1.0 + 0.3 * uni(rng);
    s.u[sp->field_offset(1) + node] = 0.3 * uni(rng);
  }
  const double e0 = free_energy(s, p.params, p.model);
  const double beta = 0.7321;
  State r(sp);
  for (int node = 0; node < sp->q2n; ++node) {
    const double a = s.u[sp->field_offset(0) + node];
    const double b = s.u[sp->field_offset(1) + node];
    r.u[sp->field_offset(0) + node] = std::cos(beta) * a - std::sin(beta) * b;
    r.u[sp->field_offset(1) + node] = std::sin(beta) * a + std::cos(beta) * b;
  }
  CHECK(free_energy(r, p.params, p.model) == doctest::Approx(e0).epsilon(1e-10));
}

TEST_CASE("lagrangian doubles the reported nematic energy at lambda = 0") {
  const auto preset = make_preset("tilt_twist");
  State s = random_state(preset.problem, 0, 4711);
  for (int c = 0; c < s.space->ncells; ++c)
    s.u[s.space->lambda_offset() + c] = 0.0;
  CHECK(lagrangian_value(s, preset.problem.params, Model::Nematic) ==
        doctest::Approx(2.0 * free_energy(s, preset.problem.params, Model::Nematic))
            .epsilon(1e-12));
}

TEST_CASE("model mismatch is a contract violation") {
  const Problem p = elastic_problem(1, 1, 1);
  const auto sp = make_space(p, 0);
  const State s = uniform_director(sp, Vec3(1, 0, 0));
  MaterialParams bad = p.params;
  bad.t0 = 1.0;
  CHECK_THROWS_AS(free_energy(s, bad, Model::Nematic), std::logic_error);
}

} // TEST_SUITE
