#pragma once

#include <string>
#include <vector>

#include "sslab/weighted_calculus.hpp"

namespace sslab {

/// One numerically evaluated identity or inequality.
/// For identities `residual` is |lhs - rhs|; for inequalities lhs <= rhs is
/// checked and `residual` is max(lhs - rhs, 0).
struct IdentityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  bool holds = false;
  std::string note;
};

/// Gaussian moments int y^k e^{-y^2/4} dy, k <= 2*degree-1, against closed forms.
std::vector<IdentityCheck> gaussian_moment_checks(const QuadratureGrid& grid, double rel_tol = 1e-10);

/// Closed form of int_R y^k e^{-y^2/4} dy.
double gaussian_moment(int k);

/// Integration by parts: <f, 𝓛g>_W = -<grad f, grad g>_W.
/// holds iff |lhs - rhs| <= tol (1 + |rhs|).
IdentityCheck verify_ibp(const GridFunction& f, const GridFunction& g, double tol = 1e-8);

/// Log test-function inequality for a positive f with L_w f = -mu f:
///   [phi^2 (p|w|^{p-1} + |grad log f|^2)]_W <= [4|grad phi|^2 - 2(mu - 1/(p-1)) phi^2]_W.
/// Throws PreconditionError if f is not positive at every node or if
/// ||L_w f + mu f||_W > eigen_tol ||f||_W.
IdentityCheck verify_log_test_inequality(const GridFunction& w, const GridFunction& f, double mu,
                                         const GridFunction& phi, double p, double tol = 1e-10,
                                         double eigen_tol = 1e-6);

/// Weighted Poincare-type bound [v^2|y|^2]_W <= 16[|grad v|^2]_W + 4n[v^2]_W.
IdentityCheck verify_poincare(const GridFunction& v, double tol = 1e-10);

/// Constants of the epsilon-absorption behind the weighted integrability bound.
struct AbsorptionConstants {
  double epsilon = 0.0;
  /// (1+eps) m^2 / (p (2m-1-eps)); strictly below 1.
  double absorbed_fraction = 0.0;
  /// Coefficient of [|w|^{2m} |grad eta|^2]_W before absorption.
  double gradient_coefficient = 0.0;
  /// Coefficient of [|w|^{2m} eta^2]_W before absorption, 1/(p-1).
  double mass_coefficient = 0.0;
  /// C with [eta^2 |w|^{2m+p-1}]_W <= C [|w|^{2m}(|grad eta|^2 + eta^2)]_W.
  double constant = 0.0;
};

/// epsilon = (1 - q)/2 * p(2m-1)/(m^2+p) with q = m^2/(p(2m-1)); throws
/// PreconditionError when m_condition(p, m) fails.
AbsorptionConstants absorption_constants(double p, double m);

/// [eta^2 |w|^{2m+p-1}]_W <= C [|w|^{2m}(|grad eta|^2 + eta^2)]_W with C from
/// absorption_constants. Preconditions: m_condition(p, m), w finite, and
/// H(w) not negative anywhere (beyond the 1e-8 sign-change floor).
IdentityCheck verify_prop35_inequality(const GridFunction& w, double m, const GridFunction& eta, double p,
                                       double tol = 1e-10);

/// Residuals of the re-centering eigen-identities L_w H = H and
/// L_w(d_i w) = d_i w / 2, measured in the weighted L^2 norm, next to the
/// norm of the profile residual F(w). Tensor grids only (spectral derivatives).
struct RecenteringResiduals {
  double time_mode = 0.0;
  std::vector<double> translation_modes;
  double profile_residual = 0.0;
  /// Weighted norm of y.grad F(w), which bounds the time-mode residual together with F.
  double profile_residual_radial = 0.0;
};

RecenteringResiduals recentering_residuals(const GridFunction& w, double p);

/// Everything above evaluated on the documented closed-form examples.
std::vector<IdentityCheck> standard_identity_battery();

}  // namespace sslab
