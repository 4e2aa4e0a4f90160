#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace sslab::oracle {

/// Smallest eigenvalues (convention L v = -lambda v) of
///   L v = v'' - y v'/2 + V(y) v,  V = p|w|^{p-1} - 1/(p-1),
/// on [-L, L] with v = 0 at the ends. The substitution v = e^{y^2/8} u turns L
/// into the Schrodinger form u'' - (y^2/16 - 1/4) u + V u, which second-order
/// differences discretize as a symmetric tridiagonal matrix.
inline std::vector<double> fd_spectrum(const std::function<double(double)>& w, double p, int count, double L = 12.0,
                                       int intervals = 4800) {
  const double h = 2.0 * L / intervals;
  const int m = intervals - 1;
  Eigen::VectorXd diag(m);
  Eigen::VectorXd off = Eigen::VectorXd::Constant(m - 1, 1.0 / (h * h));
  for (int i = 0; i < m; ++i) {
    const double y = -L + (i + 1) * h;
    const double V = p * std::pow(std::abs(w(y)), p - 1.0) - 1.0 / (p - 1.0);
    diag[i] = -2.0 / (h * h) - (y * y / 16.0 - 0.25) + V;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  // Eigenvalues of L ascend; lambda = -mu, so the largest mu give the smallest lambda.
  std::vector<double> lambda;
  const auto& mu = es.eigenvalues();
  for (int i = 0; i < count; ++i) lambda.push_back(-mu[m - 1 - i]);
  return lambda;
}

}  // namespace sslab::oracle
