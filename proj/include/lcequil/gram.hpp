#pragma once

#include "lcequil/state.hpp"

namespace lc {

/// Gram matrix of the product-space inner product used by deflation:
/// mass + div-div + curl-curl for the director, mass + stiffness for the
/// potential, mass for the multiplier. Folded to active dofs, so Dirichlet
/// entries do not participate in distances.
struct GramOperator {
  SparseMat m_active;
  std::shared_ptr<const Space> space;

  VecX apply(const VecX& active_diff) const { return m_active * active_diff; }
};

GramOperator build_gram(const std::shared_ptr<const Space>& space);

double u_distance_sq(const GramOperator& gram, const State& a, const State& b);
inline double u_distance(const GramOperator& gram, const State& a, const State& b) {
  return std::sqrt(u_distance_sq(gram, a, b));
}

} // namespace lc
