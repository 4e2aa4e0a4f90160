#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace sslab {

/// Orthonormal Hermite functions for the weight e^{-y^2/4} on the line:
/// h_k(y) = He_k(y/sqrt 2) / sqrt(2 sqrt(pi) k!). They are eigenfunctions of
/// the one-dimensional Ornstein-Uhlenbeck operator with eigenvalue -k/2, and
/// h_k' = sqrt(k/2) h_{k-1}.
void hermite_functions(double y, std::span<double> out);

/// Orthonormal Laguerre polynomials for the weight t^alpha e^{-t} on (0, inf).
void laguerre_functions(double t, double alpha, std::span<double> out);

enum class GridKind { tensor, radial };

class QuadratureGrid;
using GridPtr = std::shared_ptr<const QuadratureGrid>;

/// Nodes and positive weights with sum_k w_k f(y_k) ~ int_{R^n} f(y) e^{-|y|^2/4} dy.
///
/// A tensor grid is the product of `degree`-point Gauss rules on each axis and
/// is exact for polynomials of degree <= 2*degree-1 in every variable. A radial
/// grid integrates functions of r = |y| only: its single coordinate is r, and
/// the weights carry r^{n-1} e^{-r^2/4} together with the area of the unit
/// sphere, so both kinds integrate against the same measure on R^n.
///
/// Grids are immutable after construction and shared by every GridFunction
/// sampled on them.
class QuadratureGrid {
 public:
  static GridPtr tensor(int dim, int degree);
  static GridPtr radial(int dim, int degree);
  /// 64 points per axis in one dimension, 32 in two, 16 in three.
  static int default_degree(int dim);

  [[nodiscard]] GridKind kind() const { return kind_; }
  /// Ambient dimension n.
  [[nodiscard]] int dim() const { return dim_; }
  /// Number of stored coordinates per node: n for tensor grids, 1 for radial ones.
  [[nodiscard]] int coord_dim() const { return kind_ == GridKind::tensor ? dim_ : 1; }
  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(weights_.size()); }

  [[nodiscard]] std::span<const double> point(std::size_t k) const {
    const auto cd = static_cast<std::size_t>(coord_dim());
    return {coords_.data() + k * cd, cd};
  }
  /// |y_k|^2.
  [[nodiscard]] double radius_sq(std::size_t k) const;
  [[nodiscard]] const Eigen::VectorXd& weights() const { return weights_; }

  /// One-dimensional rule the grid is built from (Hermite nodes in y, or radii for radial grids).
  [[nodiscard]] const std::vector<double>& nodes_1d() const { return nodes_1d_; }
  [[nodiscard]] const std::vector<double>& weights_1d() const { return weights_1d_; }
  /// Axis index of node k along axis d (tensor grids; node index = sum_d i_d * degree^d).
  [[nodiscard]] int axis_index(std::size_t k, int d) const;

  /// Integral of the bare weight, (4 pi)^{n/2}.
  [[nodiscard]] double total_mass() const;

 private:
  QuadratureGrid() = default;

  GridKind kind_ = GridKind::tensor;
  int dim_ = 1;
  int degree_ = 1;
  std::vector<double> coords_;
  Eigen::VectorXd weights_;
  std::vector<double> nodes_1d_;
  std::vector<double> weights_1d_;
};

/// Area of the unit sphere S^{n-1} (2 for n = 1).
double unit_sphere_area(int n);

}  // namespace sslab
