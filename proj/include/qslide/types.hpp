#pragma once

#include <Eigen/Dense>

#include <complex>

namespace qslide {

using Real = double;
using Complex = std::complex<Real>;

using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

}  // namespace qslide
