#pragma once

#include <Eigen/Dense>

namespace dgtd {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using MatInt = Eigen::MatrixXi;
using VecInt = Eigen::VectorXi;

}  // namespace dgtd
