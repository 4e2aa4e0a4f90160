#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <span>

#include "sslab/exponents.hpp"
#include "sslab/quadrature.hpp"

namespace sslab {

/// A function sampled at the nodes of a QuadratureGrid, optionally with its
/// gradient (one column per stored coordinate; the radial derivative on a
/// radial grid) and Laplacian.
struct GridFunction {
  GridPtr grid;
  Eigen::VectorXd values;
  std::optional<Eigen::MatrixXd> gradient;
  std::optional<Eigen::VectorXd> laplacian;

  [[nodiscard]] bool has_gradient() const { return gradient.has_value(); }
  [[nodiscard]] bool has_second_derivatives() const { return gradient && laplacian; }
  /// y . grad f at every node.
  [[nodiscard]] Eigen::VectorXd radial_derivative_times_r() const;
  /// |grad f|^2 at every node.
  [[nodiscard]] Eigen::VectorXd gradient_sq() const;
};

/// A smooth function on R^n with closed-form derivatives. `gradient` writes
/// coord_dim components; either derivative may be left empty.
struct AnalyticField {
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
  std::function<double(std::span<const double>)> laplacian;

  static AnalyticField constant(double c);
  /// y_axis on a tensor grid.
  static AnalyticField coordinate(int axis);
  /// |y|^2 in dimension n (works on tensor and radial grids).
  static AnalyticField radius_squared(int n);
};

/// Samples a field (and every derivative it provides) on a grid.
GridFunction sample(const GridPtr& grid, const AnalyticField& field);

/// Samples values only.
GridFunction sample_values(const GridPtr& grid, const std::function<double(std::span<const double>)>& f);

/// Fills gradient and Laplacian by differentiating the Hermite interpolant of
/// the sampled values (tensor grids). Exact for polynomials of degree below
/// the grid degree in each variable.
GridFunction with_spectral_derivatives(GridFunction f);

/// Radially symmetric cutoff: 1 on B_R, 0 outside B_{R+1}, quintic
/// smootherstep in between (C^2, |grad| <= 15/8).
AnalyticField radial_cutoff(int n, double radius);

/// <f, g>_W = int f g e^{-|y|^2/4} dy. Throws UsageError unless f and g share a grid.
double weighted_inner(const GridFunction& f, const GridFunction& g);
/// [f]_W = int f e^{-|y|^2/4} dy.
double weighted_bracket(const GridFunction& f);
double weighted_bracket(const QuadratureGrid& grid, const Eigen::VectorXd& values);
/// <grad f, grad g>_W.
double weighted_gradient_inner(const GridFunction& f, const GridFunction& g);
double weighted_norm(const GridFunction& f);

/// Ornstein-Uhlenbeck operator Δf - y.grad f / 2, nodewise. Requires derivatives.
GridFunction ou_apply(const GridFunction& f);

/// Linearized operator L_w v = Δv - y.grad v / 2 - v/(p-1) + p|w|^{p-1} v.
/// v is an eigenfunction with eigenvalue lambda when L_w v = -lambda v.
GridFunction linearized_apply(const GridFunction& w, const GridFunction& v, const ProblemParams& params);

/// Nodewise potential p|w|^{p-1} - 1/(p-1) of the linearized operator.
Eigen::VectorXd linearized_potential(const Eigen::VectorXd& w, double p);

/// H = w/(p-1) + y.grad w / 2 with its extrema over the grid.
struct HQuantity {
  Eigen::VectorXd values;
  double min = 0.0;
  double max = 0.0;

  /// min H < -tau and max H > tau with tau = 1e-8 max|H|.
  [[nodiscard]] bool changes_sign() const;
  [[nodiscard]] bool positive() const { return min > 0.0; }
};

HQuantity compute_H(const GridFunction& w, double p);

/// F(w) = Δw - y.grad w / 2 - w/(p-1) + |w|^{p-1} w, the self-similar profile residual.
GridFunction profile_equation_residual(const GridFunction& w, double p);

}  // namespace sslab
