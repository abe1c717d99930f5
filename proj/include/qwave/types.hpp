#pragma once

#include <complex>
#include <stdexcept>
#include <Eigen/Dense>

namespace qwave {

using cxd = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;
using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr cxd iu{0.0, 1.0};

} // namespace qwave
