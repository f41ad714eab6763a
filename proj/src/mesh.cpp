#include "lcequil/mesh.hpp"

namespace lc {

StructuredMesh build_mesh(int level, bool periodic_x) {
  if (level < 0 || level > kMaxLevel)
    throw std::invalid_argument("build_mesh: level must be in [0, " +
                                std::to_string(kMaxLevel) + "]");
  StructuredMesh m;
  m.level = level;
  m.cells_per_side = kCoarseCellsPerSide << level;
  m.periodic_x = periodic_x;
  return m;
}

StructuredMesh refine(const StructuredMesh& mesh) {
  if (mesh.level >= kMaxLevel)
    throw std::invalid_argument("refine: refinement limit reached");
  StructuredMesh m = mesh;
  m.level += 1;
  m.cells_per_side *= 2;
  return m;
}

} // namespace lc
