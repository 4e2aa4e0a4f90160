#include "sslab/weighted_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sslab/errors.hpp"

namespace sslab {

namespace {

void require_same_grid(const GridFunction& f, const GridFunction& g) {
  if (!f.grid || !g.grid) throw UsageError("grid function without a grid");
  if (f.grid != g.grid) throw UsageError("grid functions live on different quadrature grids");
  if (f.values.size() != g.values.size()) throw UsageError("grid function sizes differ");
}

void require_gradient(const GridFunction& f, const char* what) {
  if (!f.gradient) throw UsageError(std::string(what) + ": gradient samples are required");
}

void require_second(const GridFunction& f, const char* what) {
  if (!f.has_second_derivatives())
    throw UsageError(std::string(what) + ": gradient and Laplacian samples are required");
}

// First and second 1-D differentiation matrices of the Hermite interpolant on the Gauss nodes.
void hermite_differentiation(const QuadratureGrid& grid, Eigen::MatrixXd& d1, Eigen::MatrixXd& d2) {
  const int m = grid.degree();
  const auto& nodes = grid.nodes_1d();
  const auto& weights = grid.weights_1d();
  Eigen::MatrixXd v(m, m), dv(m, m), ddv(m, m);
  std::vector<double> h(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    hermite_functions(nodes[i], h);
    for (int k = 0; k < m; ++k) {
      v(i, k) = h[k];
      dv(i, k) = k >= 1 ? std::sqrt(0.5 * k) * h[k - 1] : 0.0;
      ddv(i, k) = k >= 2 ? 0.5 * std::sqrt(double(k) * (k - 1)) * h[k - 2] : 0.0;
    }
  }
  // Discrete orthonormality makes V^T W the exact inverse of V.
  const Eigen::MatrixXd analysis = v.transpose() * Eigen::Map<const Eigen::VectorXd>(weights.data(), m).asDiagonal();
  d1 = dv * analysis;
  d2 = ddv * analysis;
}

Eigen::VectorXd apply_along_axis(const QuadratureGrid& grid, const Eigen::MatrixXd& d,
                                 const Eigen::VectorXd& f, int axis) {
  const auto m = static_cast<std::size_t>(grid.degree());
  std::size_t stride = 1;
  for (int i = 0; i < axis; ++i) stride *= m;
  Eigen::VectorXd out(f.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const std::size_t i = (k / stride) % m;
    const std::size_t base = k - i * stride;
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                                             f[static_cast<Eigen::Index>(base + j * stride)];
    out[static_cast<Eigen::Index>(k)] = s;
  }
  return out;
}

}  // namespace

Eigen::VectorXd GridFunction::radial_derivative_times_r() const {
  require_gradient(*this, "y.grad");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(values.size());
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const auto y = grid->point(k);
    double s = 0.0;
    for (std::size_t d = 0; d < y.size(); ++d)
      s += y[d] * (*gradient)(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
    out[static_cast<Eigen::Index>(k)] = s;
  }
  return out;
}

Eigen::VectorXd GridFunction::gradient_sq() const {
  require_gradient(*this, "|grad|^2");
  return gradient->rowwise().squaredNorm();
}

AnalyticField AnalyticField::constant(double c) {
  AnalyticField f;
  f.value = [c](std::span<const double>) { return c; };
  f.gradient = [](std::span<const double>, std::span<double> g) { std::fill(g.begin(), g.end(), 0.0); };
  f.laplacian = [](std::span<const double>) { return 0.0; };
  return f;
}

AnalyticField AnalyticField::coordinate(int axis) {
  AnalyticField f;
  f.value = [axis](std::span<const double> y) { return y[static_cast<std::size_t>(axis)]; };
  f.gradient = [axis](std::span<const double>, std::span<double> g) {
    std::fill(g.begin(), g.end(), 0.0);
    g[static_cast<std::size_t>(axis)] = 1.0;
  };
  f.laplacian = [](std::span<const double>) { return 0.0; };
  return f;
}

AnalyticField AnalyticField::radius_squared(int n) {
  AnalyticField f;
  f.value = [](std::span<const double> y) {
    double s = 0.0;
    for (double c : y) s += c * c;
    return s;
  };
  f.gradient = [](std::span<const double> y, std::span<double> g) {
    for (std::size_t d = 0; d < y.size(); ++d) g[d] = 2.0 * y[d];
  };
  f.laplacian = [n](std::span<const double>) { return 2.0 * n; };
  return f;
}

GridFunction sample(const GridPtr& grid, const AnalyticField& field) {
  if (!grid) throw UsageError("sample: null grid");
  if (!field.value) throw UsageError("sample: field has no value function");
  GridFunction out;
  out.grid = grid;
  const auto count = static_cast<Eigen::Index>(grid->size());
  const int cd = grid->coord_dim();
  out.values.resize(count);
  if (field.gradient) out.gradient = Eigen::MatrixXd(count, cd);
  if (field.laplacian) out.laplacian = Eigen::VectorXd(count);
  std::vector<double> g(static_cast<std::size_t>(cd));
  for (Eigen::Index k = 0; k < count; ++k) {
    const auto y = grid->point(static_cast<std::size_t>(k));
    out.values[k] = field.value(y);
    if (field.gradient) {
      field.gradient(y, g);
      for (int d = 0; d < cd; ++d) (*out.gradient)(k, d) = g[static_cast<std::size_t>(d)];
    }
    if (field.laplacian) (*out.laplacian)[k] = field.laplacian(y);
  }
  return out;
}

GridFunction sample_values(const GridPtr& grid, const std::function<double(std::span<const double>)>& f) {
  AnalyticField field;
  field.value = f;
  return sample(grid, field);
}

GridFunction with_spectral_derivatives(GridFunction f) {
  if (!f.grid) throw UsageError("spectral differentiation: null grid");
  if (f.grid->kind() != GridKind::tensor)
    throw UsageError("spectral differentiation is available on tensor grids only; supply derivatives");
  Eigen::MatrixXd d1, d2;
  hermite_differentiation(*f.grid, d1, d2);
  const int n = f.grid->dim();
  Eigen::MatrixXd grad(f.values.size(), n);
  Eigen::VectorXd lap = Eigen::VectorXd::Zero(f.values.size());
  for (int d = 0; d < n; ++d) {
    grad.col(d) = apply_along_axis(*f.grid, d1, f.values, d);
    lap += apply_along_axis(*f.grid, d2, f.values, d);
  }
  f.gradient = std::move(grad);
  f.laplacian = std::move(lap);
  return f;
}

AnalyticField radial_cutoff(int n, double radius) {
  if (radius < 0.0) throw DomainError("cutoff radius must be non-negative");
  // 1 - S(r - R) with S(t) = 6t^5 - 15t^4 + 10t^3 on [0, 1].
  auto profile = [radius](double r, double& e, double& de, double& dde) {
    const double t = r - radius;
    if (t <= 0.0) {
      e = 1.0, de = 0.0, dde = 0.0;
    } else if (t >= 1.0) {
      e = 0.0, de = 0.0, dde = 0.0;
    } else {
      e = 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
      de = -30.0 * t * t * (1.0 - t) * (1.0 - t);
      dde = -60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
    }
  };
  auto norm = [](std::span<const double> y) {
    double s = 0.0;
    for (double c : y) s += c * c;
    return std::sqrt(s);
  };
  AnalyticField f;
  f.value = [=](std::span<const double> y) {
    double e, de, dde;
    profile(norm(y), e, de, dde);
    return e;
  };
  f.gradient = [=](std::span<const double> y, std::span<double> g) {
    const double r = norm(y);
    double e, de, dde;
    profile(r, e, de, dde);
    for (std::size_t d = 0; d < y.size(); ++d) {
      if (y.size() == 1 && n > 1) {
        g[d] = de;  // radial grid: the stored coordinate is r itself
      } else {
        g[d] = r > 0.0 ? de * y[d] / r : 0.0;
      }
    }
  };
  f.laplacian = [=](std::span<const double> y) {
    const double r = norm(y);
    double e, de, dde;
    profile(r, e, de, dde);
    if (r == 0.0) return n * dde;
    return dde + (n - 1) * de / r;
  };
  return f;
}

double weighted_inner(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  return (f.grid->weights().array() * f.values.array() * g.values.array()).sum();
}

double weighted_bracket(const QuadratureGrid& grid, const Eigen::VectorXd& values) {
  if (static_cast<std::size_t>(values.size()) != grid.size()) throw UsageError("bracket: size mismatch");
  return grid.weights().dot(values);
}

double weighted_bracket(const GridFunction& f) {
  if (!f.grid) throw UsageError("bracket: null grid");
  return weighted_bracket(*f.grid, f.values);
}

double weighted_gradient_inner(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  require_gradient(f, "gradient inner product");
  require_gradient(g, "gradient inner product");
  const Eigen::VectorXd dots = (f.gradient->array() * g.gradient->array()).rowwise().sum();
  return f.grid->weights().dot(dots);
}

double weighted_norm(const GridFunction& f) { return std::sqrt(weighted_inner(f, f)); }

GridFunction ou_apply(const GridFunction& f) {
  require_second(f, "Ornstein-Uhlenbeck operator");
  GridFunction out;
  out.grid = f.grid;
  out.values = *f.laplacian - 0.5 * f.radial_derivative_times_r();
  return out;
}

Eigen::VectorXd linearized_potential(const Eigen::VectorXd& w, double p) {
  return (p * w.array().abs().pow(p - 1.0) - 1.0 / (p - 1.0)).matrix();
}

GridFunction linearized_apply(const GridFunction& w, const GridFunction& v, const ProblemParams& params) {
  params.validate();
  require_same_grid(w, v);
  GridFunction out = ou_apply(v);
  out.values.array() += linearized_potential(w.values, params.p).array() * v.values.array();
  return out;
}

bool HQuantity::changes_sign() const {
  const double tau = 1e-8 * std::max(std::abs(min), std::abs(max));
  return min < -tau && max > tau;
}

HQuantity compute_H(const GridFunction& w, double p) {
  if (!(p > 1.0)) throw DomainError("compute_H requires p > 1");
  HQuantity h;
  h.values = w.values / (p - 1.0) + 0.5 * w.radial_derivative_times_r();
  h.min = h.values.size() ? h.values.minCoeff() : 0.0;
  h.max = h.values.size() ? h.values.maxCoeff() : 0.0;
  return h;
}

GridFunction profile_equation_residual(const GridFunction& w, double p) {
  GridFunction out = ou_apply(w);
  out.values.array() += -w.values.array() / (p - 1.0) + w.values.array().abs().pow(p - 1.0) * w.values.array();
  return out;
}

}  // namespace sslab
