#pragma once

#include <Eigen/Dense>

#include <limits>

namespace rsim {

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = MatrixX<double>;
using VectorXd = VectorX<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace rsim
