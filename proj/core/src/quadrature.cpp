#include "sslab/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sslab/errors.hpp"

namespace sslab {

namespace {

constexpr int kNewtonSweeps = 4;

// Golub-Welsch: eigenvalues of the symmetric Jacobi matrix of the recurrence.
std::vector<double> jacobi_eigenvalues(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("Jacobi matrix eigensolve failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

// Nodes/Christoffel weights of the degree-point Gauss rule for e^{-y^2/4} dy.
void gauss_hermite(int degree, std::vector<double>& nodes, std::vector<double>& weights) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(degree);
  Eigen::VectorXd sub(std::max(degree - 1, 0));
  for (int k = 1; k < degree; ++k) sub[k - 1] = std::sqrt(2.0 * k);
  nodes = jacobi_eigenvalues(diag, sub);

  std::vector<double> h(static_cast<std::size_t>(degree) + 1);
  weights.assign(nodes.size(), 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double y = nodes[i];
    for (int sweep = 0; sweep < kNewtonSweeps; ++sweep) {
      hermite_functions(y, h);
      const double f = h[degree];
      const double df = std::sqrt(0.5 * degree) * h[degree - 1];
      if (df == 0.0) break;
      y -= f / df;
    }
    nodes[i] = y;
    hermite_functions(y, h);
    double sum = 0.0;
    for (int k = 0; k < degree; ++k) sum += h[k] * h[k];
    weights[i] = 1.0 / sum;
  }
  // Exact symmetry of the rule.
  for (std::size_t i = 0, j = nodes.size() - 1; i < j; ++i, --j) {
    const double y = 0.5 * (nodes[j] - nodes[i]);
    const double w = 0.5 * (weights[i] + weights[j]);
    nodes[i] = -y;
    nodes[j] = y;
    weights[i] = weights[j] = w;
  }
  if (nodes.size() % 2 == 1) nodes[nodes.size() / 2] = 0.0;
}

// Gauss rule for t^alpha e^{-t} dt on (0, inf).
void gauss_laguerre(int degree, double alpha, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  Eigen::VectorXd diag(degree);
  Eigen::VectorXd sub(std::max(degree - 1, 0));
  for (int k = 0; k < degree; ++k) diag[k] = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < degree; ++k) sub[k - 1] = std::sqrt(k * (k + alpha));
  nodes = jacobi_eigenvalues(diag, sub);

  std::vector<double> l(static_cast<std::size_t>(degree) + 1);
  weights.assign(nodes.size(), 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double t = nodes[i];
    for (int sweep = 0; sweep < kNewtonSweeps; ++sweep) {
      laguerre_functions(t, alpha, l);
      const double f = l[degree];
      const double df = (degree * l[degree] - std::sqrt(degree * (degree + alpha)) * l[degree - 1]) / t;
      if (df == 0.0 || !std::isfinite(df)) break;
      const double next = t - f / df;
      if (!(next > 0.0)) break;
      t = next;
    }
    nodes[i] = t;
    laguerre_functions(t, alpha, l);
    double sum = 0.0;
    for (int k = 0; k < degree; ++k) sum += l[k] * l[k];
    weights[i] = 1.0 / sum;
  }
}

}  // namespace

void hermite_functions(double y, std::span<double> out) {
  if (out.empty()) return;
  const double x = y / std::numbers::sqrt2;
  out[0] = 1.0 / std::sqrt(2.0 * std::sqrt(std::numbers::pi));
  if (out.size() > 1) out[1] = x * out[0];
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const double kd = static_cast<double>(k);
    out[k + 1] = (x * out[k] - std::sqrt(kd) * out[k - 1]) / std::sqrt(kd + 1.0);
  }
}

void laguerre_functions(double t, double alpha, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0 / std::sqrt(std::tgamma(alpha + 1.0));
  if (out.size() > 1) out[1] = (alpha + 1.0 - t) * out[0] / std::sqrt(alpha + 1.0);
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const double kd = static_cast<double>(k);
    out[k + 1] = ((2.0 * kd + alpha + 1.0 - t) * out[k] - std::sqrt(kd * (kd + alpha)) * out[k - 1]) /
                 std::sqrt((kd + 1.0) * (kd + 1.0 + alpha));
  }
}

double unit_sphere_area(int n) {
  const double half = 0.5 * n;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

GridPtr QuadratureGrid::tensor(int dim, int degree) {
  if (dim < 1) throw UsageError("quadrature dimension must be >= 1");
  if (dim > 3) throw UsageError("tensor quadrature supports n <= 3; use a radial grid for n = " +
                                std::to_string(dim));
  if (degree < 1) throw UsageError("quadrature degree must be >= 1");

  auto grid = std::shared_ptr<QuadratureGrid>(new QuadratureGrid());
  grid->kind_ = GridKind::tensor;
  grid->dim_ = dim;
  grid->degree_ = degree;
  gauss_hermite(degree, grid->nodes_1d_, grid->weights_1d_);

  std::size_t count = 1;
  for (int d = 0; d < dim; ++d) count *= static_cast<std::size_t>(degree);
  grid->coords_.resize(count * static_cast<std::size_t>(dim));
  grid->weights_.resize(static_cast<Eigen::Index>(count));
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t rest = k;
    double w = 1.0;
    for (int d = 0; d < dim; ++d) {
      const std::size_t i = rest % static_cast<std::size_t>(degree);
      rest /= static_cast<std::size_t>(degree);
      grid->coords_[k * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)] = grid->nodes_1d_[i];
      w *= grid->weights_1d_[i];
    }
    grid->weights_[static_cast<Eigen::Index>(k)] = w;
  }
  return grid;
}

GridPtr QuadratureGrid::radial(int dim, int degree) {
  if (dim < 1) throw UsageError("quadrature dimension must be >= 1");
  if (degree < 1) throw UsageError("quadrature degree must be >= 1");

  auto grid = std::shared_ptr<QuadratureGrid>(new QuadratureGrid());
  grid->kind_ = GridKind::radial;
  grid->dim_ = dim;
  grid->degree_ = degree;

  const double alpha = 0.5 * dim - 1.0;
  std::vector<double> t;
  std::vector<double> lambda;
  gauss_laguerre(degree, alpha, t, lambda);

  // r = 2 sqrt(t): r^{n-1} e^{-r^2/4} dr = 2^{n-1} t^alpha e^{-t} dt.
  const double scale = unit_sphere_area(dim) * std::pow(2.0, dim - 1);
  grid->nodes_1d_.resize(t.size());
  grid->weights_1d_.resize(t.size());
  grid->coords_.resize(t.size());
  grid->weights_.resize(static_cast<Eigen::Index>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = 2.0 * std::sqrt(t[i]);
    grid->nodes_1d_[i] = r;
    grid->coords_[i] = r;
    grid->weights_1d_[i] = scale * lambda[i];
    grid->weights_[static_cast<Eigen::Index>(i)] = scale * lambda[i];
  }
  return grid;
}

int QuadratureGrid::default_degree(int dim) {
  switch (dim) {
    case 1: return 64;
    case 2: return 32;
    default: return 16;
  }
}

double QuadratureGrid::radius_sq(std::size_t k) const {
  double s = 0.0;
  for (double c : point(k)) s += c * c;
  return s;
}

int QuadratureGrid::axis_index(std::size_t k, int d) const {
  std::size_t rest = k;
  for (int i = 0; i < d; ++i) rest /= static_cast<std::size_t>(degree_);
  return static_cast<int>(rest % static_cast<std::size_t>(degree_));
}

double QuadratureGrid::total_mass() const { return std::pow(4.0 * std::numbers::pi, 0.5 * dim_); }

}  // namespace sslab
