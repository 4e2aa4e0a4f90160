#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles/gaussian_moments.hpp"
#include "sslab/errors.hpp"
#include "sslab/identities.hpp"
#include "sslab/weighted_calculus.hpp"
#include "support/generators.hpp"

using namespace sslab;
using sslab::testing::for_all;
using sslab::testing::Gen;

namespace {

const double sqrt_pi = std::sqrt(std::numbers::pi);

GridFunction values(const GridPtr& g, const Eigen::VectorXd& v) {
  GridFunction f;
  f.grid = g;
  f.values = v;
  return f;
}

// sum_{i+j <= d} c_ij y1^i y2^j with exact derivatives (n = 2), or c_i y^i (n = 1).
struct Poly {
  int n;
  std::vector<std::tuple<int, int, double>> t;
  AnalyticField field() const {
    AnalyticField f;
    auto terms = t;
    auto mono = [](double x, int k) { return k < 0 ? 0.0 : std::pow(x, k); };
    f.value = [=](std::span<const double> y) {
      double s = 0;
      for (auto [i, j, c] : terms) s += c * mono(y[0], i) * (y.size() > 1 ? mono(y[1], j) : 1.0);
      return s;
    };
    f.gradient = [=](std::span<const double> y, std::span<double> g) {
      g[0] = 0;
      if (y.size() > 1) g[1] = 0;
      for (auto [i, j, c] : terms) {
        const double yj = y.size() > 1 ? mono(y[1], j) : 1.0;
        g[0] += c * i * mono(y[0], i - 1) * yj;
        if (y.size() > 1) g[1] += c * j * mono(y[0], i) * mono(y[1], j - 1);
      }
    };
    f.laplacian = [=](std::span<const double> y) {
      double s = 0;
      for (auto [i, j, c] : terms) {
        const double yj = y.size() > 1 ? mono(y[1], j) : 1.0;
        s += c * i * (i - 1) * mono(y[0], i - 2) * yj;
        if (y.size() > 1) s += c * j * (j - 1) * mono(y[0], i) * mono(y[1], j - 2);
      }
      return s;
    };
    return f;
  }
};

Poly random_poly(Gen& g, int n, int degree) {
  Poly p{n, {}};
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; j <= (n == 2 ? degree - i : 0); ++j) p.t.emplace_back(i, j, g.uniform(-1, 1));
  return p;
}

}  // namespace

TEST_CASE("weights integrate the bare Gaussian to (4 pi)^{n/2}") {
  for (int n = 1; n <= 3; ++n) {
    const double expect = std::pow(4.0 * std::numbers::pi, 0.5 * n);
    CAPTURE(n);
    const auto t = QuadratureGrid::tensor(n, QuadratureGrid::default_degree(n));
    CHECK(std::abs(t->weights().sum() - expect) < 1e-12 * expect);
    const auto r = QuadratureGrid::radial(n, 40);
    CHECK(std::abs(r->weights().sum() - expect) < 1e-12 * expect);
    CHECK(t->total_mass() == doctest::Approx(expect).epsilon(1e-14));
  }
  CHECK(QuadratureGrid::default_degree(1) == 64);
  CHECK(QuadratureGrid::default_degree(2) == 32);
  CHECK(QuadratureGrid::default_degree(3) == 16);
}

TEST_CASE("one-dimensional moments match the Gamma-function oracle up to degree 2*degree-1") {
  for (int degree : {8, 16, 64}) {
    const auto g = QuadratureGrid::tensor(1, degree);
    for (int k = 0; k <= 2 * degree - 1; ++k) {
      double s = 0.0, a = 0.0;
      for (std::size_t i = 0; i < g->nodes_1d().size(); ++i) {
        s += g->weights_1d()[i] * std::pow(g->nodes_1d()[i], k);
        a += g->weights_1d()[i] * std::abs(std::pow(g->nodes_1d()[i], k));
      }
      const double exact = oracle::gaussian_moment(k);
      CAPTURE(degree);
      CAPTURE(k);
      CHECK(std::abs(s - exact) <= 1e-10 * (k % 2 ? a : exact));
      CHECK(gaussian_moment(k) == doctest::Approx(exact).epsilon(1e-13));
    }
    for (const auto& c : gaussian_moment_checks(*g)) CHECK(c.holds);
  }
}

TEST_CASE("radial grids integrate even moments") {
  for (int n : {1, 2, 3, 5, 11}) {
    const auto g = QuadratureGrid::radial(n, 30);
    for (int j = 0; j <= 20; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < g->size(); ++k) s += g->weights()[static_cast<Eigen::Index>(k)] * std::pow(g->radius_sq(k), j);
      const double exact = oracle::radial_moment(n, j);
      CAPTURE(n);
      CAPTURE(j);
      CHECK(std::abs(s - exact) < 1e-10 * exact);
    }
  }
}

TEST_CASE("weighted inner product examples") {
  const auto g = QuadratureGrid::tensor(1, 64);
  const auto one = sample(g, AnalyticField::constant(1.0));
  const auto y = sample(g, AnalyticField::coordinate(0));
  CHECK(weighted_inner(one, one) == doctest::Approx(2.0 * sqrt_pi).epsilon(1e-13));
  CHECK(std::abs(weighted_inner(one, y)) < 1e-13);
  CHECK(weighted_inner(y, y) == doctest::Approx(4.0 * sqrt_pi).epsilon(1e-13));

  const auto other = QuadratureGrid::tensor(1, 32);
  CHECK_THROWS_AS(weighted_inner(one, sample(other, AnalyticField::constant(1.0))), UsageError);
}

TEST_CASE("Ornstein-Uhlenbeck operator examples") {
  for (int n : {1, 2, 3}) {
    const auto g = QuadratureGrid::tensor(n, QuadratureGrid::default_degree(n));
    CHECK(ou_apply(sample(g, AnalyticField::constant(1.0))).values.cwiseAbs().maxCoeff() == 0.0);
    const auto y1 = sample(g, AnalyticField::coordinate(0));
    CHECK((ou_apply(y1).values + 0.5 * y1.values).cwiseAbs().maxCoeff() < 1e-12);
    const auto r2 = sample(g, AnalyticField::radius_squared(n));
    const Eigen::VectorXd expect = (2.0 * n) - r2.values.array();
    CHECK((ou_apply(r2).values - expect).cwiseAbs().maxCoeff() < 1e-10);
  }
  const auto r = QuadratureGrid::radial(3, 40);
  const auto r2 = sample(r, AnalyticField::radius_squared(3));
  CHECK((ou_apply(r2).values - (6.0 - r2.values.array()).matrix()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("linearized operator examples") {
  const auto g = QuadratureGrid::tensor(1, 64);
  const auto one = sample(g, AnalyticField::constant(1.0));
  const auto y = sample(g, AnalyticField::coordinate(0));
  for (double p : {2.0, 3.0, 5.0}) {
    const auto w = sample(g, AnalyticField::constant(kappa(p)));
    const ProblemParams P{1, p};
    CHECK((linearized_apply(w, one, P).values.array() - 1.0).abs().maxCoeff() < 1e-12);
    CHECK((linearized_apply(w, y, P).values - 0.5 * y.values).cwiseAbs().maxCoeff() < 1e-11);
  }
  const auto zero = sample(g, AnalyticField::constant(0.0));
  CHECK((linearized_apply(zero, one, ProblemParams{1, 2.0}).values.array() + 1.0).abs().maxCoeff() < 1e-14);
}

TEST_CASE("H examples") {
  const auto g = QuadratureGrid::tensor(1, 64);
  const auto h = compute_H(sample(g, AnalyticField::constant(1.0)), 2.0);
  CHECK(h.min == doctest::Approx(1.0));
  CHECK(h.max == doctest::Approx(1.0));
  CHECK(h.positive());
  CHECK_FALSE(h.changes_sign());

  const auto y = sample(g, AnalyticField::coordinate(0));
  const auto hy = compute_H(y, 2.0);
  CHECK((hy.values - 1.5 * y.values).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(hy.changes_sign());

  const auto h0 = compute_H(sample(g, AnalyticField::constant(0.0)), 2.0);
  CHECK(h0.min == 0.0);
  CHECK(h0.max == 0.0);
  CHECK_FALSE(h0.changes_sign());
  CHECK_FALSE(h0.positive());
  CHECK_THROWS(compute_H(values(g, y.values), 2.0));
}

TEST_CASE("spectral derivatives are exact for polynomials below the grid degree") {
  Gen gen(5);
  for (int n : {1, 2}) {
    const auto g = QuadratureGrid::tensor(n, n == 1 ? 40 : 20);
    const auto p = random_poly(gen, n, 6).field();
    const auto exact = sample(g, p);
    const auto spec = with_spectral_derivatives(values(g, exact.values));
    // Weighted L^2 errors; pointwise errors at the outermost nodes are dominated by rounding.
    const auto wnorm = [&](const Eigen::VectorXd& v) { return std::sqrt(weighted_bracket(*g, v.array().square().matrix())); };
    for (int d = 0; d < n; ++d) {
      const double err = wnorm(spec.gradient->col(d) - exact.gradient->col(d));
      CAPTURE(n);
      CHECK(err < 1e-10 * (1.0 + wnorm(exact.gradient->col(d))));
    }
    CHECK(wnorm(*spec.laplacian - *exact.laplacian) < 1e-9 * (1.0 + wnorm(*exact.laplacian)));
  }
}

TEST_CASE("profile equation residual vanishes at the constants") {
  const auto g = QuadratureGrid::tensor(2, 16);
  for (double p : {1.5, 2.0, 7.0}) {
    CHECK(profile_equation_residual(sample(g, AnalyticField::constant(kappa(p))), p).values.cwiseAbs().maxCoeff() < 1e-14);
    CHECK(profile_equation_residual(sample(g, AnalyticField::constant(-kappa(p))), p).values.cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("property: Ornstein-Uhlenbeck operator is self-adjoint on random polynomial pairs") {
  const GridPtr grids[2] = {QuadratureGrid::tensor(1, 64), QuadratureGrid::tensor(2, 32)};
  for_all(200, 21, [&](Gen& gen, int i) {
    const int n = 1 + i % 2;
    const auto f = sample(grids[n - 1], random_poly(gen, n, gen.integer(0, 6)).field());
    const auto h = sample(grids[n - 1], random_poly(gen, n, gen.integer(0, 6)).field());
    const double lhs = weighted_inner(f, ou_apply(h));
    const double grad = weighted_gradient_inner(f, h);
    CAPTURE(i);
    CHECK(std::abs(lhs + grad) < 1e-8 * (1.0 + std::abs(grad)));
    // Symmetry of the bilinear form itself.
    CHECK(std::abs(weighted_inner(f, ou_apply(h)) - weighted_inner(h, ou_apply(f))) < 1e-8 * (1.0 + std::abs(grad)));
  });
}

TEST_CASE("cutoff has the documented shape") {
  const auto g = QuadratureGrid::tensor(1, 64);
  const auto eta = sample(g, radial_cutoff(1, 2.0));
  for (std::size_t k = 0; k < g->size(); ++k) {
    const double y = std::abs(g->point(k)[0]);
    const double v = eta.values[static_cast<Eigen::Index>(k)];
    if (y <= 2.0) CHECK(v == 1.0);
    if (y >= 3.0) CHECK(v == 0.0);
    CHECK(std::abs((*eta.gradient)(static_cast<Eigen::Index>(k), 0)) <= 15.0 / 8.0 + 1e-12);
  }
}
