#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace lc {

using VecX = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using SparseMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

} // namespace lc
