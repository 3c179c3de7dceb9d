#pragma once

#include <complex>

#include <Eigen/Dense>

namespace risec {

using Real = double;
using Complex = std::complex<double>;

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

} // namespace risec
