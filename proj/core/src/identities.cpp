#include "sslab/identities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sslab/errors.hpp"

namespace sslab {

namespace {

IdentityCheck equality(std::string name, double lhs, double rhs, double tol) {
  IdentityCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.residual = std::abs(lhs - rhs);
  c.holds = c.residual <= tol * (1.0 + std::abs(rhs));
  return c;
}

IdentityCheck inequality(std::string name, double lhs, double rhs, double tol) {
  IdentityCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.residual = std::max(lhs - rhs, 0.0);
  c.holds = lhs <= rhs + tol * (1.0 + std::abs(rhs));
  return c;
}

double sup_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

GridFunction from_values(const GridPtr& grid, Eigen::VectorXd values) {
  GridFunction f;
  f.grid = grid;
  f.values = std::move(values);
  return f;
}

}  // namespace

double gaussian_moment(int k) {
  if (k < 0) throw DomainError("moment order must be non-negative");
  if (k % 2 == 1) return 0.0;
  double m = 2.0 * std::sqrt(std::numbers::pi);
  for (int j = 1; j < k; j += 2) m *= 2.0 * j;  // (k-1)!! 2^{k/2}
  return m;
}

std::vector<IdentityCheck> gaussian_moment_checks(const QuadratureGrid& grid, double rel_tol) {
  if (grid.kind() != GridKind::tensor) throw UsageError("moment checks need a Hermite (tensor) rule");
  const auto& y = grid.nodes_1d();
  const auto& w = grid.weights_1d();
  std::vector<IdentityCheck> out;
  for (int k = 0; k <= 2 * grid.degree() - 1; ++k) {
    double sum = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double t = std::pow(y[i], k);
      sum += w[i] * t;
      scale += w[i] * std::abs(t);
    }
    IdentityCheck c;
    c.name = "gaussian_moment_" + std::to_string(k);
    c.lhs = sum;
    c.rhs = gaussian_moment(k);
    c.residual = std::abs(sum - c.rhs);
    // Odd moments vanish; measure them against the absolute moment.
    const double ref = k % 2 == 0 ? std::abs(c.rhs) : scale;
    c.holds = c.residual <= rel_tol * ref;
    out.push_back(std::move(c));
  }
  return out;
}

IdentityCheck verify_ibp(const GridFunction& f, const GridFunction& g, double tol) {
  const double lhs = weighted_inner(f, ou_apply(g));
  const double rhs = -weighted_gradient_inner(f, g);
  return equality("integration_by_parts", lhs, rhs, tol);
}

IdentityCheck verify_log_test_inequality(const GridFunction& w, const GridFunction& f, double mu,
                                         const GridFunction& phi, double p, double tol, double eigen_tol) {
  if (!(p > 1.0)) throw DomainError("log-test inequality requires p > 1");
  if (f.values.size() == 0 || f.values.minCoeff() <= 0.0)
    throw PreconditionError("log-test inequality: f must be positive at every node");

  const ProblemParams params{f.grid->dim(), p};
  const GridFunction lf = linearized_apply(w, f, params);
  const GridFunction eig = from_values(f.grid, lf.values + mu * f.values);
  const double eig_res = weighted_norm(eig);
  const double fnorm = weighted_norm(f);
  if (eig_res > eigen_tol * fnorm) {
    std::ostringstream os;
    os << "log-test inequality: L_w f = -mu f fails, residual " << eig_res << " vs norm " << fnorm;
    throw PreconditionError(os.str());
  }

  const Eigen::ArrayXd phi2 = phi.values.array().square();
  const Eigen::ArrayXd grad_log_f_sq = f.gradient_sq().array() / f.values.array().square();
  const Eigen::ArrayXd lhs_density = phi2 * (p * w.values.array().abs().pow(p - 1.0) + grad_log_f_sq);
  const Eigen::ArrayXd rhs_density = 4.0 * phi.gradient_sq().array() - 2.0 * (mu - 1.0 / (p - 1.0)) * phi2;

  IdentityCheck c = inequality("log_test_inequality", weighted_bracket(*f.grid, lhs_density.matrix()),
                               weighted_bracket(*f.grid, rhs_density.matrix()), tol);
  std::ostringstream note;
  note << "mu=" << mu << " eigen_residual=" << eig_res;
  c.note = note.str();
  return c;
}

IdentityCheck verify_poincare(const GridFunction& v, double tol) {
  const auto& grid = *v.grid;
  Eigen::VectorXd r2(v.values.size());
  for (std::size_t k = 0; k < grid.size(); ++k) r2[static_cast<Eigen::Index>(k)] = grid.radius_sq(k);
  const Eigen::ArrayXd v2 = v.values.array().square();
  const double lhs = weighted_bracket(grid, (v2 * r2.array()).matrix());
  const double rhs = 16.0 * weighted_bracket(grid, v.gradient_sq()) + 4.0 * grid.dim() * weighted_bracket(grid, v2.matrix());
  return inequality("weighted_poincare", lhs, rhs, tol);
}

AbsorptionConstants absorption_constants(double p, double m) {
  if (!m_condition(p, m)) {
    std::ostringstream os;
    os << "m_condition fails for p=" << p << ", m=" << m;
    throw PreconditionError(os.str());
  }
  AbsorptionConstants a;
  const double q = m * m / (p * (2.0 * m - 1.0));
  // Largest admissible eps is p(2m-1)(1-q)/(m^2+p); take half of it.
  a.epsilon = 0.5 * (1.0 - q) * p * (2.0 * m - 1.0) / (m * m + p);
  const double eps = a.epsilon;
  a.absorbed_fraction = (1.0 + eps) * m * m / (p * (2.0 * m - 1.0 - eps));
  a.gradient_coefficient =
      (1.0 + 1.0 / eps) / p + (1.0 + eps) * m * m / (p * (2.0 * m - 1.0 - eps) * eps);
  a.mass_coefficient = 1.0 / (p - 1.0);
  a.constant = std::max(a.gradient_coefficient, a.mass_coefficient) / (1.0 - a.absorbed_fraction);
  return a;
}

IdentityCheck verify_prop35_inequality(const GridFunction& w, double m, const GridFunction& eta, double p,
                                       double tol) {
  const AbsorptionConstants a = absorption_constants(p, m);
  if (!w.values.allFinite()) throw PreconditionError("prop35 inequality: w must be bounded on the grid");
  const HQuantity h = compute_H(w, p);
  const double floor = 1e-8 * std::max(std::abs(h.min), std::abs(h.max));
  if (h.min < -floor) throw PreconditionError("prop35 inequality: H(w) is negative somewhere");

  const Eigen::ArrayXd absw = w.values.array().abs();
  const Eigen::ArrayXd eta2 = eta.values.array().square();
  const double lhs = weighted_bracket(*w.grid, (eta2 * absw.pow(2.0 * m + p - 1.0)).matrix());
  const double rhs =
      a.constant * weighted_bracket(*w.grid, (absw.pow(2.0 * m) * (eta.gradient_sq().array() + eta2)).matrix());
  IdentityCheck c = inequality("prop35_inequality", lhs, rhs, tol);
  std::ostringstream note;
  note.precision(12);
  note << "m=" << m << " eps=" << a.epsilon << " absorbed=" << a.absorbed_fraction << " C=" << a.constant;
  c.note = note.str();
  return c;
}

RecenteringResiduals recentering_residuals(const GridFunction& w_in, double p) {
  const GridFunction w = with_spectral_derivatives(from_values(w_in.grid, w_in.values));
  const ProblemParams params{w.grid->dim(), p};
  RecenteringResiduals out;

  const HQuantity hq = compute_H(w, p);
  const GridFunction h = with_spectral_derivatives(from_values(w.grid, hq.values));
  const GridFunction lh = linearized_apply(w, h, params);
  out.time_mode = weighted_norm(from_values(w.grid, lh.values - h.values));

  for (int i = 0; i < w.grid->dim(); ++i) {
    const GridFunction wi = with_spectral_derivatives(from_values(w.grid, w.gradient->col(i)));
    const GridFunction lwi = linearized_apply(w, wi, params);
    out.translation_modes.push_back(weighted_norm(from_values(w.grid, lwi.values - 0.5 * wi.values)));
  }

  const GridFunction f = with_spectral_derivatives(profile_equation_residual(w, p));
  out.profile_residual = weighted_norm(f);
  out.profile_residual_radial = weighted_norm(from_values(w.grid, f.radial_derivative_times_r()));
  return out;
}

std::vector<IdentityCheck> standard_identity_battery() {
  std::vector<IdentityCheck> out;
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  const GridPtr g1 = QuadratureGrid::tensor(1, QuadratureGrid::default_degree(1));
  const GridPtr g2 = QuadratureGrid::tensor(2, QuadratureGrid::default_degree(2));

  // Quadrature exactness, summarized as the worst relative error.
  {
    const auto moments = gaussian_moment_checks(*g1);
    double worst = 0.0;
    bool all = true;
    for (const auto& c : moments) {
      const double ref = c.rhs != 0.0 ? std::abs(c.rhs) : 1.0;
      if (c.rhs != 0.0) worst = std::max(worst, c.residual / ref);
      all = all && c.holds;
    }
    IdentityCheck c;
    c.name = "gaussian_moments_max_rel_error";
    c.lhs = worst;
    c.rhs = 1e-10;
    c.residual = worst;
    c.holds = all;
    c.note = "orders 0.." + std::to_string(2 * g1->degree() - 1);
    out.push_back(c);
  }

  const GridFunction one = sample(g1, AnalyticField::constant(1.0));
  const GridFunction y = sample(g1, AnalyticField::coordinate(0));
  const GridFunction y2 = sample(g1, AnalyticField::radius_squared(1));
  out.push_back(equality("inner_1_1", weighted_inner(one, one), 2.0 * sqrt_pi, 1e-12));
  out.push_back(equality("inner_1_y", weighted_inner(one, y), 0.0, 1e-12));
  out.push_back(equality("inner_y_y", weighted_inner(y, y), 4.0 * sqrt_pi, 1e-12));

  // OU operator on monomials.
  out.push_back(equality("ou_y_sup_residual", sup_abs(ou_apply(y).values + 0.5 * y.values), 0.0, 1e-12));
  out.push_back(equality("ou_r2_sup_residual",
                         sup_abs(ou_apply(y2).values - (2.0 - y2.values.array()).matrix()), 0.0, 1e-12));

  // Re-centering eigenpairs at the constant profile.
  for (double p : {2.0, 3.0, 5.0}) {
    const double k = kappa(p);
    const GridFunction wk = sample(g1, AnalyticField::constant(k));
    const ProblemParams params{1, p};
    const GridFunction l1 = linearized_apply(wk, one, params);
    out.push_back(equality("L_kappa_const_eigenvalue_p" + std::to_string(int(p)), -l1.values.mean(), -1.0, 1e-10));
    const GridFunction ly = linearized_apply(wk, y, params);
    out.push_back(equality("L_kappa_y_sup_residual_p" + std::to_string(int(p)),
                           sup_abs(ly.values - 0.5 * y.values), 0.0, 1e-10));
    const HQuantity h = compute_H(wk, p);
    out.push_back(equality("H_kappa_p" + std::to_string(int(p)), h.min, k / (p - 1.0), 1e-10));
  }
  {
    const GridFunction zero = sample(g1, AnalyticField::constant(0.0));
    const GridFunction l = linearized_apply(zero, one, ProblemParams{1, 2.0});
    out.push_back(equality("L_zero_const_eigenvalue_p2", -l.values.mean(), 1.0, 1e-12));
  }

  // Integration by parts.
  out.push_back(verify_ibp(y2, y2));
  out.back().name = "ibp_y2_y2";
  out.push_back(verify_ibp(y, y));
  out.back().name = "ibp_y_y";
  {
    const GridFunction poly = with_spectral_derivatives(sample_values(g1, [](std::span<const double> v) {
      const double t = v[0];
      return 1.0 - 2.0 * t + 0.5 * t * t * t - 0.1 * t * t * t * t * t;
    }));
    out.push_back(verify_ibp(one, poly));
    out.back().name = "ibp_1_poly";
    const GridFunction p2 = sample(g2, AnalyticField::radius_squared(2));
    out.push_back(verify_ibp(p2, p2));
    out.back().name = "ibp_r2_r2_n2";
  }

  // Log test-function inequality.
  {
    const double p = 2.0;
    const GridFunction wk = sample(g1, AnalyticField::constant(kappa(p)));
    const GridFunction h = sample(g1, AnalyticField::constant(kappa(p) / (p - 1.0)));
    out.push_back(verify_log_test_inequality(wk, h, -1.0, one, p));
    out.back().name = "log_test_kappa_phi_1";
    out.push_back(verify_log_test_inequality(wk, h, -1.0, y, p));
    out.back().name = "log_test_kappa_phi_y";
    const GridFunction zero = sample(g1, AnalyticField::constant(0.0));
    out.push_back(verify_log_test_inequality(zero, one, 1.0 / (p - 1.0), y, p));
    out.back().name = "log_test_zero_f_1";
  }

  // Poincare-type bound.
  {
    const GridFunction bump = sample(g1, radial_cutoff(1, 1.0));
    out.push_back(verify_poincare(bump));
    out.back().name = "poincare_bump";
    out.push_back(verify_poincare(sample(g1, AnalyticField::constant(0.0))));
    out.back().name = "poincare_zero";
    const AnalyticField cut = radial_cutoff(1, 1.0);
    AnalyticField ybump;
    ybump.value = [cut](std::span<const double> v) { return v[0] * cut.value(v); };
    ybump.gradient = [cut](std::span<const double> v, std::span<double> g) {
      double dc[1];
      cut.gradient(v, dc);
      g[0] = cut.value(v) + v[0] * dc[0];
    };
    out.push_back(verify_poincare(sample(g1, ybump)));
    out.back().name = "poincare_y_bump";
  }

  // Weighted integrability bound.
  {
    const GridFunction eta = sample(g1, radial_cutoff(1, 4.0));
    const GridFunction w2 = sample(g1, AnalyticField::constant(kappa(2.0)));
    out.push_back(verify_prop35_inequality(w2, 2.0, eta, 2.0));
    out.back().name = "prop35_kappa_m_p_p2";
    const GridFunction zero = sample(g1, AnalyticField::constant(0.0));
    out.push_back(verify_prop35_inequality(zero, 2.0, eta, 2.0));
    out.back().name = "prop35_zero";
    const GridFunction w25 = sample(g1, AnalyticField::constant(kappa(2.5)));
    out.push_back(verify_prop35_inequality(w25, 0.75, eta, 2.5));
    out.back().name = "prop35_kappa_half_exponent_p2.5";
  }
  return out;
}

}  // namespace sslab
