#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles/fd_spectrum.hpp"
#include "sslab/errors.hpp"
#include "sslab/spectral.hpp"
#include "support/generators.hpp"

using namespace sslab;
using sslab::testing::for_all;
using sslab::testing::Gen;

namespace {

// kappa + c exp(-y^2 / s^2) on the line.
AnalyticField kappa_plus_gaussian(double p, double c, double s) {
  const double k = kappa(p);
  AnalyticField f;
  f.value = [=](std::span<const double> y) { return k + c * std::exp(-y[0] * y[0] / (s * s)); };
  f.gradient = [=](std::span<const double> y, std::span<double> g) {
    g[0] = -2.0 * y[0] / (s * s) * c * std::exp(-y[0] * y[0] / (s * s));
  };
  f.laplacian = [=](std::span<const double> y) {
    const double e = c * std::exp(-y[0] * y[0] / (s * s));
    return (4.0 * y[0] * y[0] / (s * s * s * s) - 2.0 / (s * s)) * e;
  };
  return f;
}

}  // namespace

TEST_CASE("tensor bases are orthonormal") {
  for (auto [n, N] : {std::pair{1, 32}, std::pair{2, 144}, std::pair{3, 512}}) {
    const auto b = build_basis(n, N);
    CAPTURE(n);
    CHECK(b.size == N);
    CHECK((b.gram() - Eigen::MatrixXd::Identity(N, N)).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK_THROWS_AS(build_basis(2, 10), UsageError);
  CHECK_THROWS_AS(build_basis(1, 40, QuadratureGrid::tensor(1, 16)), UsageError);
}

TEST_CASE("radial bases are orthonormal") {
  for (int n : {1, 3, 11}) {
    const auto b = build_radial_basis(n, 24);
    CHECK((b.gram() - Eigen::MatrixXd::Identity(24, 24)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(b.ou_eigenvalues[3] == doctest::Approx(-3.0));
  }
}

TEST_CASE("Galerkin matrix is diagonal at constant profiles") {
  const auto b = build_basis(1, 32);
  for (double p : {2.0, 3.0, 5.0}) {
    const auto w = sample(b.grid, AnalyticField::constant(kappa(p)));
    const auto op = assemble(w, b, ProblemParams{1, p});
    CHECK(op.symmetry_residual() < 1e-12);
    // A = diag(1 - k/2): diagonal entries 1, 1/2, 0, -1/2.
    for (int k = 0; k < 4; ++k) CHECK(op.matrix(k, k) == doctest::Approx(1.0 - 0.5 * k).epsilon(1e-12));
    CHECK((op.matrix - Eigen::MatrixXd(op.matrix.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-10);
  }
  const auto zero = assemble(sample(b.grid, AnalyticField::constant(0.0)), b, ProblemParams{1, 2.0});
  CHECK(zero.matrix(0, 0) == doctest::Approx(-1.0));
  CHECK(zero.matrix(1, 1) == doctest::Approx(-1.5));
}

TEST_CASE("spectrum at kappa reproduces the closed-form eigenvalues") {
  const auto b = build_basis(1, 32);
  for (double p : {2.0, 3.0, 5.0}) {
    const auto w = sample(b.grid, AnalyticField::constant(kappa(p)));
    const auto op = assemble(w, b, ProblemParams{1, p});
    const auto s = spectrum(op, 4);
    const double expect[4] = {-1.0, -0.5, 0.0, 0.5};
    for (int k = 0; k < 4; ++k) CHECK(std::abs(s.eigenvalues[k] - expect[k]) < 1e-6);
    CHECK(std::abs(first_eigenvalue_rayleigh(op) + 1.0) < 1e-8);

    const auto fd = oracle::fd_spectrum([p](double) { return kappa(p); }, p, 4);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(fd[k] - expect[k]) < 1e-3);
  }
  const auto op = assemble(sample(b.grid, AnalyticField::constant(1.0)), b, ProblemParams{1, 2.0});
  CHECK_THROWS_AS(spectrum(op, 0), UsageError);
  CHECK_THROWS_AS(spectrum(op, 33), UsageError);
}

TEST_CASE("spectrum at zero") {
  const auto b = build_basis(1, 32);
  const auto op = assemble(sample(b.grid, AnalyticField::constant(0.0)), b, ProblemParams{1, 3.0});
  const auto s = spectrum(op, 3);
  CHECK(s.eigenvalues[0] == doctest::Approx(0.5));
  CHECK(s.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(s.eigenvalues[2] == doctest::Approx(1.5));
}

TEST_CASE("radial spectrum at kappa in three dimensions") {
  const auto b = build_radial_basis(3, 32);
  const auto op = assemble(sample(b.grid, AnalyticField::constant(kappa(3.0))), b, ProblemParams{3, 3.0});
  const auto s = spectrum(op, 2);
  CHECK(s.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-10));
  // The first radial OU eigenvalue above 0 is -1 (|y|^2 - 2n): lambda = 0.
  CHECK(std::abs(s.eigenvalues[1]) < 1e-10);
}

TEST_CASE("property: Galerkin spectrum agrees with the finite-difference oracle on perturbed profiles") {
  const auto b = build_basis(1, 32);
  for_all(6, 41, [&](Gen& gen, int i) {
    const double p = gen.uniform(1.5, 5.0);
    const double c = gen.uniform(-0.3, 0.3);
    const double s = gen.uniform(1.0, 2.5);
    const auto field = kappa_plus_gaussian(p, c, s);
    const auto op = assemble(sample(b.grid, field), b, ProblemParams{1, p});
    const auto spec = spectrum(op, 4);
    const auto fd = oracle::fd_spectrum([&](double y) { const double v[1] = {y}; return field.value(v); }, p, 4);
    CAPTURE(i);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(spec.eigenvalues[k] - fd[k]) < 1e-3);
    CHECK(std::abs(first_eigenvalue_rayleigh(op) - spec.eigenvalues[0]) < 1e-8);
  });
}

TEST_CASE("property: the first eigenvalue does not increase with the basis size") {
  for_all(5, 42, [](Gen& gen, int i) {
    const double p = gen.uniform(1.5, 4.0);
    const auto field = kappa_plus_gaussian(p, gen.uniform(-0.3, 0.3), gen.uniform(1.0, 2.0));
    const auto grid = QuadratureGrid::tensor(1, 64);
    double previous = std::numeric_limits<double>::infinity();
    for (int N : {4, 8, 16, 24, 32, 48}) {
      const auto op = assemble(sample(grid, field), build_basis(1, N, grid), ProblemParams{1, p});
      const double l1 = spectrum(op, 1).eigenvalues[0];
      CAPTURE(i);
      CAPTURE(N);
      CHECK(l1 <= previous + 1e-12);
      previous = l1;
    }
  });
}

TEST_CASE("sign-change consistency") {
  const auto g = QuadratureGrid::tensor(1, 64);
  const auto k = theorem58_check(sample(g, AnalyticField::constant(kappa(2.0))), ProblemParams{1, 2.0});
  CHECK_FALSE(k.h_changes_sign);
  CHECK(k.consistent);
  CHECK(k.lambda1 == doctest::Approx(-1.0));
  // Bumpy profile whose H changes sign: lambda1 must lie below -1.
  const auto bump = theorem58_check(sample(g, kappa_plus_gaussian(2.0, 0.8, 1.0)), ProblemParams{1, 2.0});
  CHECK(bump.h_changes_sign == (bump.h_min < 0.0));
  CHECK(bump.consistent);
  if (bump.h_changes_sign) CHECK(bump.lambda1 < -1.0);
}

TEST_CASE("stability classification") {
  const auto g = QuadratureGrid::tensor(1, 64);
  const auto k = stability_classify(sample(g, AnalyticField::constant(kappa(3.0))), ProblemParams{1, 3.0});
  CHECK(k.linearly_stable);
  REQUIRE(k.unstable_modes.size() == 2);
  CHECK(k.unstable_modes[0].kind == ModeKind::time_recentering);
  CHECK(k.unstable_modes[1].kind == ModeKind::translation_eigenvalue);
  CHECK_FALSE(k.note.empty());

  const auto z = stability_classify(sample(g, AnalyticField::constant(0.0)), ProblemParams{1, 3.0});
  CHECK(z.linearly_stable);
  CHECK(z.unstable_modes.empty());

  const auto r = stability_classify(sample(QuadratureGrid::radial(3, 64), AnalyticField::constant(kappa(3.0))),
                                    ProblemParams{3, 3.0});
  CHECK(r.linearly_stable);
  CHECK(r.eigenvalues.front() == doctest::Approx(-1.0));
}
