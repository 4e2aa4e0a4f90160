#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sslab/identities.hpp"
#include "sslab/weighted_calculus.hpp"

namespace sslab::app {

/// Polynomial sum_j c_j y^{a_j} in n <= 2 variables with closed-form derivatives.
struct Polynomial {
  int dim = 1;
  std::vector<std::pair<std::vector<int>, double>> terms;

  [[nodiscard]] AnalyticField field() const;
  /// Random coefficients in [-1, 1] on every monomial of total degree <= degree.
  static Polynomial random(int dim, int degree, std::mt19937_64& rng);
};

/// A bounded positive w with H(w) > 0, a positive f and mu with L_w f = -mu f
/// holding at every node. f = exp(g) with a Gaussian bump g; the potential
/// p w^{p-1} is then whatever makes f an eigenfunction.
struct EigenTriple {
  double p = 2.0;
  double mu = 0.0;
  GridFunction w;
  GridFunction f;
  std::string description;
};

/// Draws until H(w) > 0 and the potential is positive; throws NumericError after 1000 rejections.
EigenTriple random_eigen_triple(const GridPtr& grid, std::mt19937_64& rng);

/// a + b.y + c|y|^2 with random coefficients.
AnalyticField random_test_function(int dim, std::mt19937_64& rng);

/// (a + b.y) eta_R(y - y0): compactly supported, smooth, random.
AnalyticField random_bump(int dim, std::mt19937_64& rng);

/// A random admissible m for p: m = p, m = (p-1)/2 when admissible, or a point
/// strictly inside the admissible interval.
double random_admissible_m(double p, std::mt19937_64& rng);

/// The randomized suites: integration by parts on `ibp_pairs` polynomial pairs
/// (degree <= 6, alternating n = 1, 2), log-test and weighted integrability
/// inequalities on `inequality_cases` eigen-triples, and the Poincare bound on
/// `poincare_cases` random bumps.
std::vector<IdentityCheck> randomized_identity_suite(std::uint64_t seed, int ibp_pairs, int inequality_cases,
                                                     int poincare_cases);

}  // namespace sslab::app
