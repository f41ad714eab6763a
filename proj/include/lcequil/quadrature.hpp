#pragma once

#include <array>
#include <vector>

namespace lc {

struct QuadPoint {
  double x, y, w;
};

/// Tensor-product Gauss rule on the reference square [0,1]^2.
struct QuadratureRule {
  std::vector<QuadPoint> points;
  /// Exact for polynomials up to this degree in each direction.
  int exact_degree = 0;
};

QuadratureRule gauss_rule_2d(int points_1d);

/// Biquadratic Lagrange basis on [0,1]^2, nodes at {0, 1/2, 1} per direction,
/// tensor numbering l = 3*a + b with a the x-index and b the y-index.
namespace q2 {

double shape_1d(int a, double t);
double dshape_1d(int a, double t);

inline double value(int l, double x, double y) {
  return shape_1d(l / 3, x) * shape_1d(l % 3, y);
}
inline std::array<double, 2> grad(int l, double x, double y) {
  return {dshape_1d(l / 3, x) * shape_1d(l % 3, y),
          shape_1d(l / 3, x) * dshape_1d(l % 3, y)};
}

} // namespace q2

/// Reference-cell shape values and gradients tabulated at quadrature points.
struct ShapeTable {
  QuadratureRule rule;
  // [qp][local node]
  std::vector<std::array<double, 9>> val;
  std::vector<std::array<double, 9>> dx;
  std::vector<std::array<double, 9>> dy;
};

const ShapeTable& q2_shape_table_3x3();

} // namespace lc
