#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sslab/errors.hpp"
#include "sslab/evolution.hpp"
#include "support/generators.hpp"

using namespace sslab;
using sslab::testing::for_all;
using sslab::testing::Gen;

namespace {

double energy_at_kappa(double p) { return (0.5 - 1.0 / (p + 1.0)) * std::pow(kappa(p), p + 1.0); }

// Max difference at the coarse nodes, which the finer mesh contains.
double nested_gap(const EvolutionState& coarse, const EvolutionState& fine) {
  const auto stride = (fine.mesh.size() - 1) / (coarse.mesh.size() - 1);
  double gap = 0.0;
  for (std::size_t i = 0; i < coarse.mesh.size(); ++i)
    gap = std::max(gap, std::abs(coarse.w[static_cast<Eigen::Index>(i)] -
                                 fine.w[static_cast<Eigen::Index>(i * stride)]));
  return gap;
}

}  // namespace

TEST_CASE("normalized measure integrates 1 to 1") {
  for (int n : {1, 2, 3, 5}) {
    const auto mesh = RescaledMesh::make(n, 10.0, 2000);
    CAPTURE(n);
    CHECK(mesh.integrate(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(mesh.size()))) ==
          doctest::Approx(1.0).epsilon(1e-5));
  }
  CHECK_THROWS_AS(RescaledMesh::make(1, 8.0, 3), UsageError);
}

TEST_CASE("energy at the fixed points, quadrature version") {
  for (int n : {1, 2, 3}) {
    const auto g = QuadratureGrid::tensor(n, QuadratureGrid::default_degree(n));
    for (double p : {1.5, 2.0, 3.0, 7.0}) {
      const ProblemParams P{n, p};
      CHECK(energy(sample(g, AnalyticField::constant(0.0)), P).E == 0.0);
      const auto e = energy(sample(g, AnalyticField::constant(kappa(p))), P);
      CAPTURE(n);
      CAPTURE(p);
      CHECK(std::abs(e.E - energy_at_kappa(p)) < 1e-10);
      CHECK(e.dirichlet == 0.0);
    }
  }
}

TEST_CASE("energy at the fixed points, mesh version") {
  const auto mesh = RescaledMesh::make(1, 8.0, 800);
  const auto N = static_cast<Eigen::Index>(mesh.size());
  const ProblemParams P{1, 2.0};
  CHECK(energy(mesh, Eigen::VectorXd::Zero(N), P).E == 0.0);
  const double mass = mesh.integrate(Eigen::VectorXd::Ones(N));
  CHECK(energy(mesh, Eigen::VectorXd::Constant(N, 1.0), P).E == doctest::Approx(energy_at_kappa(2.0) * mass));
}

TEST_CASE("kappa is an exact fixed point; zero is preserved to rounding") {
  for (int n : {1, 3}) {
    const ProblemParams P{n, 3.0};
    auto k = make_rescaled_state(P, 8.0, 200, [](double) { return kappa(3.0); });
    evolve_rescaled(k, 1e-2, 1.0);
    CHECK(distance_to_kappa(k) == 0.0);
    auto z = make_rescaled_state(P, 8.0, 200, [](double) { return 0.0; });
    evolve_rescaled(z, 1e-2, 1.0);
    CHECK(z.w.cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("property: energy is nonincreasing along random rescaled runs") {
  for_all(12, 61, [](Gen& gen, int i) {
    const double p = gen.uniform(1.5, 4.0);
    const int n = gen.integer(1, 3);
    const double k = kappa(p);
    const double a = gen.uniform(-0.5, 0.5) * k;
    const double c = gen.uniform(0.5, 3.0);
    const double ds = gen.uniform(1e-3, 5e-2);
    auto st = make_rescaled_state(ProblemParams{n, p}, 8.0, 400,
                                  [=](double y) { return k + a * std::exp(-y * y / (c * c)); });
    evolve_rescaled(st, ds, 2.0);
    CAPTURE(i);
    CAPTURE(p);
    CAPTURE(ds);
    for (std::size_t j = 1; j < st.energy_history.size(); ++j) {
      const double e0 = st.energy_history[j - 1].second;
      const double e1 = st.energy_history[j].second;
      CHECK(e1 <= e0 + 1e-12 * (1.0 + std::abs(e0)));
    }
  });
}

TEST_CASE("dissipation identity on the perturbed constant") {
  const ProblemParams P{1, 2.0};
  auto st = make_rescaled_state(
      P, 8.0, 1600, [](double y) { return 1.0 + 0.1 * std::exp(-y * y); }, 10);
  evolve_rescaled(st, 1e-3, 2.0);
  const auto d = dissipation_check(st, 0.0, st.snapshots.back().s);
  CHECK(d.samples >= 5);
  CHECK(d.rel_err < 0.02);
  CHECK(d.rhs > 0.0);
  CHECK_THROWS_AS(dissipation_check(st, 0.0, 0.01), PreconditionError);
}

TEST_CASE("escaping runs halt at the cap") {
  auto st = make_rescaled_state(ProblemParams{1, 2.0}, 8.0, 200, [](double) { return 1.5; });
  st.cap = 10.0;
  evolve_rescaled(st, 1e-2, 20.0);
  CHECK(st.halted);
  CHECK_FALSE(st.event.empty());
  CHECK(st.w.maxCoeff() <= 10.0);
}

TEST_CASE("state on a quadrature grid") {
  auto st = make_rescaled_state(ProblemParams{1, 2.0}, 8.0, 800, [](double y) { return 1.0 + 0.1 * y * y; });
  const auto g = state_on_grid(st, QuadratureGrid::tensor(1, 32));
  for (std::size_t k = 0; k < g.grid->size(); ++k) {
    const double y = g.grid->point(k)[0];
    if (std::abs(y) > 7.5) continue;
    const auto e = static_cast<Eigen::Index>(k);
    CHECK(std::abs(g.values[e] - (1.0 + 0.1 * y * y)) < 1e-9);
    CHECK(std::abs((*g.gradient)(e, 0) - 0.2 * y) < 1e-4);
    CHECK(std::abs((*g.laplacian)[e] - 0.2) < 1e-2);
  }
}

TEST_CASE("first order in s, second order in y") {
  const ProblemParams P{1, 2.0};
  auto init = [](double y) { return 1.0 + 0.2 * std::exp(-y * y); };

  // Time: fixed fine mesh, halve ds.
  std::vector<double> gaps;
  auto reference = make_rescaled_state(P, 8.0, 200, init);
  evolve_rescaled(reference, 1e-4, 0.5);
  for (double ds : {4e-3, 2e-3, 1e-3}) {
    auto st = make_rescaled_state(P, 8.0, 200, init);
    evolve_rescaled(st, ds, 0.5);
    gaps.push_back((st.w - reference.w).cwiseAbs().maxCoeff());
  }
  for (std::size_t j = 1; j < gaps.size(); ++j) {
    const double order = std::log2(gaps[j - 1] / gaps[j]);
    CAPTURE(order);
    CHECK(std::abs(order - 1.0) < 0.5);
  }

  // Space: small ds, double the cells.
  gaps.clear();
  auto fine = make_rescaled_state(P, 8.0, 1600, init);
  evolve_rescaled(fine, 1e-4, 0.5);
  for (int cells : {100, 200, 400}) {
    auto st = make_rescaled_state(P, 8.0, cells, init);
    evolve_rescaled(st, 1e-4, 0.5);
    gaps.push_back(nested_gap(st, fine));
  }
  for (std::size_t j = 1; j < gaps.size(); ++j) {
    const double order = std::log2(gaps[j - 1] / gaps[j]);
    CAPTURE(order);
    CHECK(order > 2.0 / 1.5);
    CHECK(order < 2.0 * 1.5);
  }
}
