#pragma once

#include <cmath>

namespace sslab::oracle {

/// int_R y^k e^{-y^2/4} dy through the Gamma function: 2^{k+1} Gamma((k+1)/2)
/// for even k, 0 for odd k.
inline double gaussian_moment(int k) {
  if (k % 2 == 1) return 0.0;
  return std::ldexp(std::tgamma(0.5 * (k + 1)), k + 1);
}

/// int_{R^n} |y|^{2j} e^{-|y|^2/4} dy = |S^{n-1}| 2^{2j+n-1} Gamma(j + n/2).
inline double radial_moment(int n, int j) {
  const double sphere = 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
  return sphere * std::ldexp(std::tgamma(j + 0.5 * n), 2 * j + n - 1);
}

}  // namespace sslab::oracle
