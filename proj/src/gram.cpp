#include "lcequil/gram.hpp"

#include <stdexcept>

#include "lcequil/quadrature.hpp"

namespace lc {

GramOperator build_gram(const std::shared_ptr<const Space>& space) {
  const auto& sp = *space;
  const auto& tab = q2_shape_table_3x3();
  const int N = sp.mesh.cells_per_side;
  const double h = sp.mesh.cell_width();
  const double inv_h = 1.0 / h, jw = h * h;

  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(N) * N * (27 * 27 + 81 + 1));

  std::array<int, 9> nodes{};
  double Bx[9], By[9];
  for (int cx = 0; cx < N; ++cx)
    for (int cy = 0; cy < N; ++cy) {
      for (int l = 0; l < 9; ++l)
        nodes[l] = sp.node_index(2 * cx + l / 3, 2 * cy + l % 3);
      const int cell = sp.cell_index(cx, cy);

      double Knn[27][27] = {};
      double Kphi[9][9] = {};
      for (std::size_t q = 0; q < tab.rule.points.size(); ++q) {
        const double w = tab.rule.points[q].w * jw;
        const auto& B = tab.val[q];
        for (int l = 0; l < 9; ++l) {
          Bx[l] = tab.dx[q][l] * inv_h;
          By[l] = tab.dy[q][l] * inv_h;
        }
        for (int ka = 0; ka < 27; ++ka) {
          const int a = ka / 9, l = ka % 9;
          const double dva = a == 0 ? Bx[l] : (a == 1 ? By[l] : 0.0);
          for (int kb = ka; kb < 27; ++kb) {
            const int b = kb / 9, m = kb % 9;
            double t = dva * (b == 0 ? Bx[m] : (b == 1 ? By[m] : 0.0));
            // curl(v_a) . curl(v_b)
            if (a == 0 && b == 0) t += By[l] * By[m];
            else if (a == 0 && b == 1) t += -By[l] * Bx[m];
            else if (a == 1 && b == 0) t += -Bx[l] * By[m];
            else if (a == 1 && b == 1) t += Bx[l] * Bx[m];
            else if (a == 2 && b == 2) t += Bx[l] * Bx[m] + By[l] * By[m];
            if (a == b) t += B[l] * B[m];
            Knn[ka][kb] += w * t;
            if (kb != ka) Knn[kb][ka] += w * t;
          }
        }
        if (sp.has_phi)
          for (int l = 0; l < 9; ++l)
            for (int m = l; m < 9; ++m) {
              const double t =
                  w * (B[l] * B[m] + Bx[l] * Bx[m] + By[l] * By[m]);
              Kphi[l][m] += t;
              if (m != l) Kphi[m][l] += t;
            }
      }

      for (int ka = 0; ka < 27; ++ka) {
        const int ra = sp.active_of[sp.field_offset(ka / 9) + nodes[ka % 9]];
        if (ra < 0) continue;
        for (int kb = 0; kb < 27; ++kb) {
          const int rb = sp.active_of[sp.field_offset(kb / 9) + nodes[kb % 9]];
          if (rb >= 0) trips.emplace_back(ra, rb, Knn[ka][kb]);
        }
      }
      if (sp.has_phi)
        for (int l = 0; l < 9; ++l) {
          const int ra = sp.active_of[sp.phi_offset() + nodes[l]];
          if (ra < 0) continue;
          for (int m = 0; m < 9; ++m) {
            const int rb = sp.active_of[sp.phi_offset() + nodes[m]];
            if (rb >= 0) trips.emplace_back(ra, rb, Kphi[l][m]);
          }
        }
      const int rl = sp.active_of[sp.lambda_offset() + cell];
      trips.emplace_back(rl, rl, jw); // P0 mass
    }

  GramOperator g;
  g.space = space;
  g.m_active.resize(sp.n_active, sp.n_active);
  g.m_active.setFromTriplets(trips.begin(), trips.end());
  g.m_active.makeCompressed();
  return g;
}

double u_distance_sq(const GramOperator& gram, const State& a, const State& b) {
  if (!a.space->compatible_with(*b.space) || !a.space->compatible_with(*gram.space))
    throw std::invalid_argument("u_distance_sq: states on different spaces");
  const VecX d = a.active() - b.active();
  return d.dot(gram.m_active * d);
}

} // namespace lc
