#pragma once

#include <stdexcept>

namespace lc {

inline constexpr int kCoarseCellsPerSide = 8;
inline constexpr int kMaxLevel = 6;

/// Uniform quadrilateral mesh of the unit square. Level 0 is 8x8 cells and
/// each refinement doubles the cell count per side.
struct StructuredMesh {
  int cells_per_side = 0;
  int level = 0;
  bool periodic_x = false;

  double cell_width() const { return 1.0 / cells_per_side; }
  int q2_side() const { return 2 * cells_per_side + 1; }
  long q2_count() const { return static_cast<long>(q2_side()) * q2_side(); }
  long cell_count() const {
    return static_cast<long>(cells_per_side) * cells_per_side;
  }

  /// Q2 node coordinates, ix/iy in [0, 2*cells_per_side].
  double node_x(int ix) const { return static_cast<double>(ix) / (2 * cells_per_side); }
  double node_y(int iy) const { return static_cast<double>(iy) / (2 * cells_per_side); }
};

StructuredMesh build_mesh(int level, bool periodic_x);
StructuredMesh refine(const StructuredMesh& mesh);

} // namespace lc
