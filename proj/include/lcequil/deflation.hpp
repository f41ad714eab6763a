#pragma once

#include <optional>

#include "lcequil/gram.hpp"
#include "lcequil/linear_solver.hpp"

namespace lc {

struct DeflationConfig {
  double p = 3.0;    // exponent, >= 1
  double alpha = 1.0; // shift, >= 0
};

/// Known solutions on the current mesh.
struct DeflationSet {
  std::vector<State> roots;
  bool empty() const { return roots.empty(); }
};

class SingularDeflationError : public std::runtime_error {
 public:
  explicit SingularDeflationError(const std::string& w) : std::runtime_error(w) {}
};

/// U-distances from u to every root.
std::vector<double> root_distances(const GramOperator& gram, const State& u,
                                   const DeflationSet& set);

/// eta(u) = prod_i (1/||u - r_i||^p + alpha); 1 for an empty set.
/// Throws SingularDeflationError when u coincides with a root.
double eta(const GramOperator& gram, const State& u, const DeflationSet& set,
           const DeflationConfig& cfg);

/// Discrete gradient of eta over active dofs.
VecX eta_gradient(const GramOperator& gram, const State& u, const DeflationSet& set,
                  const DeflationConfig& cfg);

struct DeflatedUpdateInfo {
  int krylov_iterations = 0;
  double sherman_morrison_denominator = 1.0;
};

class SingularUpdateError : public std::runtime_error {
 public:
  explicit SingularUpdateError(const std::string& w) : std::runtime_error(w) {}
};

/// Newton update for the deflated system via Sherman-Morrison: exactly one
/// inner solve with the undeflated Jacobian, one dot product, one scaling.
VecX deflated_update(const AssembledSystem& system, const VecX& d, double eta_val,
                     InnerSolver& solver, DeflatedUpdateInfo* info = nullptr);

inline constexpr double kRootCoincidence = 1e-12; // U-distance, "at known root"
inline constexpr double kDistinctness = 1e-3;     // U-distance, new-solution guard

} // namespace lc
