#include "lcequil/problem.hpp"

#include <stdexcept>

namespace lc {

void Problem::validate() const {
  if (params.K1 <= 0 || params.K2 <= 0 || params.K3 <= 0)
    throw std::invalid_argument("Problem: Frank constants must be positive");
  if (model == Model::Nematic && params.t0 != 0.0)
    throw std::invalid_argument("Problem: nonzero t0 requires the cholesteric model");
  if (electric && (params.eps0 <= 0 || params.eps_perp <= 0))
    throw std::invalid_argument("Problem: electric problems need eps0 and eps_perp");
  if (electric && !bc.phi)
    throw std::invalid_argument("Problem: electric problems need potential boundary data");
  if (director_sides != DirichletSides::None && !bc.director)
    throw std::invalid_argument("Problem: missing director boundary data");
}

} // namespace lc
