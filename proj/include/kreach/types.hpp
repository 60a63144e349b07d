#pragma once

#include <Eigen/Core>

namespace kreach {

using Index = Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Point sets are stored one point per row.
template <typename Scalar>
using PointMatrix = MatrixX<Scalar>;

using MatrixXd = MatrixX<double>;
using VectorXd = VectorX<double>;

}  // namespace kreach
