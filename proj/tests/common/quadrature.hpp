#pragma once
// Gauss-Legendre nodes and weights (Golub-Welsch) for the uniform density on
// [-1, 1]; weights sum to 1.

#include <Eigen/Dense>

#include <cmath>
#include <utility>

namespace gpce::test {

inline std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  Eigen::VectorXd w = eig.eigenvectors().row(0).transpose().array().square();
  return {eig.eigenvalues(), w};
}

}  // namespace gpce::test
