#include "lcequil/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace lc {
namespace {

// Gauss-Legendre abscissas/weights on [-1,1].
struct Rule1d {
  std::vector<double> x, w;
};

Rule1d gauss_1d(int n) {
  switch (n) {
    case 1:
      return {{0.0}, {2.0}};
    case 2: {
      const double a = 1.0 / std::sqrt(3.0);
      return {{-a, a}, {1.0, 1.0}};
    }
    case 3: {
      const double a = std::sqrt(3.0 / 5.0);
      return {{-a, 0.0, a}, {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}};
    }
    case 4: {
      const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
      const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
      return {{-b, -a, a, b}, {wb, wa, wa, wb}};
    }
    case 5: {
      const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
      const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
      const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
      return {{-b, -a, 0.0, a, b}, {wb, wa, 128.0 / 225.0, wa, wb}};
    }
    default:
      throw std::invalid_argument("gauss_rule_2d: 1..5 points supported");
  }
}

} // namespace

QuadratureRule gauss_rule_2d(int points_1d) {
  const Rule1d r = gauss_1d(points_1d);
  QuadratureRule rule;
  rule.exact_degree = 2 * points_1d - 1;
  for (int i = 0; i < points_1d; ++i)
    for (int j = 0; j < points_1d; ++j)
      rule.points.push_back({0.5 * (r.x[i] + 1.0), 0.5 * (r.x[j] + 1.0),
                             0.25 * r.w[i] * r.w[j]});
  return rule;
}

namespace q2 {

double shape_1d(int a, double t) {
  switch (a) {
    case 0: return (2.0 * t - 1.0) * (t - 1.0);
    case 1: return 4.0 * t * (1.0 - t);
    default: return t * (2.0 * t - 1.0);
  }
}

double dshape_1d(int a, double t) {
  switch (a) {
    case 0: return 4.0 * t - 3.0;
    case 1: return 4.0 - 8.0 * t;
    default: return 4.0 * t - 1.0;
  }
}

} // namespace q2

const ShapeTable& q2_shape_table_3x3() {
  static const ShapeTable table = [] {
    ShapeTable t;
    t.rule = gauss_rule_2d(3);
    const std::size_t nq = t.rule.points.size();
    t.val.resize(nq);
    t.dx.resize(nq);
    t.dy.resize(nq);
    for (std::size_t q = 0; q < nq; ++q) {
      const auto& p = t.rule.points[q];
      for (int l = 0; l < 9; ++l) {
        t.val[q][l] = q2::value(l, p.x, p.y);
        const auto g = q2::grad(l, p.x, p.y);
        t.dx[q][l] = g[0];
        t.dy[q][l] = g[1];
      }
    }
    return t;
  }();
  return table;
}

} // namespace lc
