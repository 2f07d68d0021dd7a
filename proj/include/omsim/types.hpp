#pragma once

#include <Eigen/Dense>

namespace omsim {

// Quadrature ordering everywhere: [Q_d, P_d, Q_b1, P_b1, Q_b2, P_b2].
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;
using Mat2 = Eigen::Matrix2d;

}  // namespace omsim
