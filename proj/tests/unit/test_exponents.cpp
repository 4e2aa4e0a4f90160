#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "sslab/errors.hpp"
#include "sslab/exponents.hpp"
#include "support/generators.hpp"

using namespace sslab;
using sslab::testing::for_all;
using sslab::testing::Gen;

TEST_CASE("kappa closed forms") {
  CHECK(kappa(2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kappa(3.0) == doctest::Approx(0.7071067811865476).epsilon(1e-15));
  CHECK(kappa(5.0) == doctest::Approx(0.7071067811865476).epsilon(1e-15));
}

TEST_CASE("kappa rejects p <= 1") {
  CHECK_THROWS_AS(kappa(1.0), DomainError);
  CHECK_THROWS_AS(kappa(0.5), DomainError);
  CHECK_THROWS_AS(kappa(std::nan("")), DomainError);
}

TEST_CASE("ProblemParams validation") {
  CHECK_NOTHROW(ProblemParams{1, 2.0}.validate());
  CHECK_THROWS_AS((ProblemParams{0, 2.0}.validate()), DomainError);
  CHECK_THROWS_AS((ProblemParams{3, 1.0}.validate()), DomainError);
}

TEST_CASE("critical exponents by dimension") {
  const auto c1 = critical_exponents(1);
  CHECK(c1.sobolev.is_infinite());
  CHECK(c1.joseph_lundgren.is_infinite());
  CHECK(c1.lepin.is_infinite());
  CHECK(critical_exponents(2).sobolev.is_infinite());

  const auto c3 = critical_exponents(3);
  CHECK(c3.sobolev.value() == doctest::Approx(5.0));
  CHECK(c3.joseph_lundgren.is_infinite());

  const auto c11 = critical_exponents(11);
  CHECK(c11.sobolev.value() == doctest::Approx(13.0 / 9.0));
  const double jl = 1.0 + 4.0 * (11.0 - 4.0 + 2.0 * std::sqrt(10.0)) / (9.0 * 1.0);
  CHECK(c11.joseph_lundgren.value() == doctest::Approx(jl).epsilon(1e-14));
  CHECK(std::abs(c11.joseph_lundgren.value() - 6.9220) < 1e-3);
  CHECK(c11.lepin.value() == doctest::Approx(7.0).epsilon(1e-15));
}

TEST_CASE("extended reals order +inf above every finite value") {
  const auto inf = ExtendedReal::infinity();
  const ExtendedReal five(5.0);
  CHECK(five < inf);
  CHECK_FALSE(inf < five);
  CHECK(inf == ExtendedReal::infinity());
  CHECK(five < 6.0);
  CHECK(inf > 1e308);
  CHECK(std::isinf(inf.to_double()));
  CHECK_THROWS(static_cast<void>(inf.value()));
}

TEST_CASE("m_condition examples") {
  CHECK(m_condition(2.0, 2.0));
  CHECK(m_condition(2.2, 0.6));
  CHECK_FALSE(m_condition(2.0, 0.5));
  CHECK(half_exponent_threshold() == doctest::Approx(1.0 + std::sqrt(4.0 / 3.0)));
  CHECK(half_exponent_admissible(2.2));
  CHECK_FALSE(half_exponent_admissible(2.1));
  CHECK_THROWS_AS(m_condition(1.0, 2.0), DomainError);
}

TEST_CASE("property: kappa^{p-1} (p-1) = 1") {
  for_all(100, 11, [](Gen& g, int i) {
    const double p = g.open_closed(1.0, 20.0);
    CAPTURE(i);
    CAPTURE(p);
    CHECK(std::abs(std::pow(kappa(p), p - 1.0) * (p - 1.0) - 1.0) < 1e-12);
  });
}

TEST_CASE("property: p_S < p_JL < p_L for 11 <= n <= 50") {
  for (int n = 11; n <= 50; ++n) {
    const auto c = critical_exponents(n);
    CAPTURE(n);
    CHECK(c.sobolev < c.joseph_lundgren);
    CHECK(c.joseph_lundgren < c.lepin);
  }
}

TEST_CASE("property: m = p is always admissible; m = (p-1)/2 iff p > 1 + sqrt(4/3)") {
  for_all(200, 12, [](Gen& g, int) {
    const double p = g.open_closed(1.0, 30.0);
    CAPTURE(p);
    CHECK(m_condition(p, p));
    CHECK(m_condition(p, 0.5 * (p - 1.0)) == (p > 1.0 + std::sqrt(4.0 / 3.0)));
  });
}
