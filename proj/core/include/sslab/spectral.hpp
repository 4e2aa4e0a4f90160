#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "sslab/weighted_calculus.hpp"

namespace sslab {

/// Orthonormal basis of a truncation of the Gaussian-weighted L^2 space,
/// tabulated at the nodes of a quadrature grid.
///
/// Tensor bases are products of Hermite functions, `per_axis` of them along
/// each axis (size = per_axis^n). Radial bases are Laguerre polynomials in
/// r^2/4 and span the radial functions only. Both consist of eigenfunctions
/// of the Ornstein-Uhlenbeck operator; `ou_eigenvalues[j]` holds the
/// eigenvalue of basis function j.
struct WeightedBasis {
  GridPtr grid;
  int dim = 1;
  int size = 0;
  int per_axis = 0;
  /// values(k, j) = v_j(y_k).
  Eigen::MatrixXd values;
  /// gradients[d](k, j) = d_d v_j(y_k); one entry per stored grid coordinate.
  std::vector<Eigen::MatrixXd> gradients;
  std::vector<double> ou_eigenvalues;

  [[nodiscard]] GridKind kind() const { return grid->kind(); }
  /// Gram matrix <v_i, v_j>_W evaluated by quadrature.
  [[nodiscard]] Eigen::MatrixXd gram() const;
  /// Grid values of sum_j c_j v_j.
  [[nodiscard]] Eigen::VectorXd synthesize(const Eigen::VectorXd& coefficients) const;
};

/// Tensor Hermite basis with N = M^n functions on `grid` (default: a tensor
/// grid of the default degree, enlarged to M if needed). Throws UsageError if
/// N is not an n-th power or M exceeds the degree of a supplied grid.
WeightedBasis build_basis(int n, int N, GridPtr grid = nullptr);

/// Radial Laguerre basis with N functions for radially symmetric problems in
/// any dimension (the measure is r^{n-1} e^{-r^2/4} dr times the sphere area).
WeightedBasis build_radial_basis(int n, int N, GridPtr grid = nullptr);

/// Galerkin matrix of L_w on the basis:
///   A_ij = -<grad v_i, grad v_j>_W + <(p|w|^{p-1} - 1/(p-1)) v_i, v_j>_W.
struct SpectralOperator {
  WeightedBasis basis;
  Eigen::MatrixXd matrix;
  GridFunction profile;
  ProblemParams params;

  [[nodiscard]] double symmetry_residual() const;
};

SpectralOperator assemble(const GridFunction& w, const WeightedBasis& basis, const ProblemParams& params);

/// Eigenpairs in the convention L v = -lambda v, lambda ascending.
struct SpectrumReport {
  std::vector<double> eigenvalues;
  /// Column j holds the basis coefficients of the eigenfunction for eigenvalues[j].
  Eigen::MatrixXd coefficients;
};

/// The k smallest eigenvalues (k <= N). Throws UsageError for k out of range and
/// NumericError if the eigensolver fails.
SpectrumReport spectrum(const SpectralOperator& op, int k);

/// Minimum of the Rayleigh quotient
///   (<grad v, grad v>_W + <(1/(p-1) - p|w|^{p-1}) v, v>_W) / <v, v>_W
/// over the discrete space, by locally optimal conjugate-gradient iteration.
/// Independent of the dense eigensolver used by spectrum().
double first_eigenvalue_rayleigh(const SpectralOperator& op, double tol = 1e-13, int max_iterations = 0);

/// Basis size used when callers do not pick one: 32 per axis in one dimension,
/// 12 in two, 8 in three, 32 radial functions.
int default_basis_size(const QuadratureGrid& grid);

struct SignChangeCheck {
  bool h_changes_sign = false;
  double h_min = 0.0;
  double h_max = 0.0;
  double lambda1 = 0.0;
  /// !h_changes_sign || lambda1 < -1 + tol.
  bool consistent = false;
};

/// If H = w/(p-1) + y.grad w / 2 changes sign the first eigenvalue must lie below -1.
/// `w` needs gradient samples; basis_size 0 selects default_basis_size.
SignChangeCheck theorem58_check(const GridFunction& w, const ProblemParams& params, int basis_size = 0,
                                double tol = 1e-4);

enum class ModeKind {
  time_recentering,   // in span{H}
  space_recentering,  // in span{H, d_i w}
  translation_eigenvalue,  // eigenvalue -1/2 while every d_i w vanishes (see StabilityReport::note)
  unexplained,
};

std::string to_string(ModeKind kind);

struct UnstableMode {
  double eigenvalue = 0.0;
  /// ||v - P v||_W / ||v||_W with P the weighted projection onto span{H, d_i w}.
  double projection_residual = 0.0;
  ModeKind kind = ModeKind::unexplained;
};

struct StabilityReport {
  bool linearly_stable = false;
  std::vector<double> eigenvalues;
  std::vector<UnstableMode> unstable_modes;
  std::string note;
};

/// Linear-stability classification: every eigenfunction with lambda < 0 must
/// be a re-centering mode, i.e. lie in span{H, d_1 w, ..., d_n w} up to
/// span_tol (relative weighted residual). When all d_i w vanish identically
/// (w constant), eigenfunctions with lambda = -1/2 are accepted as translation
/// modes and the report says so.
StabilityReport stability_classify(const GridFunction& w, const ProblemParams& params, int basis_size = 0,
                                   double span_tol = 1e-4);

}  // namespace sslab
