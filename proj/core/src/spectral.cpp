#include "sslab/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "sslab/errors.hpp"

namespace sslab {

namespace {

int integer_root(int value, int n) {
  const int guess = static_cast<int>(std::lround(std::pow(static_cast<double>(value), 1.0 / n)));
  for (int m = std::max(guess - 1, 1); m <= guess + 1; ++m) {
    long long p = 1;
    for (int d = 0; d < n; ++d) p *= m;
    if (p == value) return m;
  }
  return -1;
}

Eigen::VectorXd project_out(const std::vector<Eigen::VectorXd>& span, const Eigen::VectorXd& v,
                            const Eigen::VectorXd& weights) {
  if (span.empty()) return v;
  const auto m = static_cast<Eigen::Index>(span.size());
  Eigen::MatrixXd gram(m, m);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    rhs[i] = (weights.array() * span[i].array() * v.array()).sum();
    for (Eigen::Index j = 0; j < m; ++j) gram(i, j) = (weights.array() * span[i].array() * span[j].array()).sum();
  }
  const Eigen::VectorXd alpha = gram.completeOrthogonalDecomposition().solve(rhs);
  Eigen::VectorXd out = v;
  for (Eigen::Index i = 0; i < m; ++i) out -= alpha[i] * span[i];
  return out;
}

double weighted_l2(const Eigen::VectorXd& v, const Eigen::VectorXd& weights) {
  return std::sqrt((weights.array() * v.array().square()).sum());
}

}  // namespace

Eigen::MatrixXd WeightedBasis::gram() const { return values.transpose() * grid->weights().asDiagonal() * values; }

Eigen::VectorXd WeightedBasis::synthesize(const Eigen::VectorXd& coefficients) const {
  if (coefficients.size() != size) throw UsageError("coefficient vector does not match basis size");
  return values * coefficients;
}

WeightedBasis build_basis(int n, int N, GridPtr grid) {
  if (n < 1) throw UsageError("basis dimension must be >= 1");
  if (N < 1) throw UsageError("basis size must be >= 1");
  const int per_axis = integer_root(N, n);
  if (per_axis < 1) {
    throw UsageError("tensor basis size " + std::to_string(N) + " is not a perfect power of n = " + std::to_string(n));
  }
  if (!grid) {
    grid = QuadratureGrid::tensor(n, std::max(QuadratureGrid::default_degree(n), per_axis));
  }
  if (grid->kind() != GridKind::tensor || grid->dim() != n) throw UsageError("tensor basis needs a tensor grid of dimension n");
  if (per_axis > grid->degree()) {
    throw UsageError("basis needs " + std::to_string(per_axis) + " functions per axis but the quadrature is exact only up to " +
                     std::to_string(grid->degree()));
  }

  const int degree = grid->degree();
  Eigen::MatrixXd h1(degree, per_axis), dh1(degree, per_axis);
  std::vector<double> tmp(static_cast<std::size_t>(per_axis));
  for (int i = 0; i < degree; ++i) {
    hermite_functions(grid->nodes_1d()[i], tmp);
    for (int m = 0; m < per_axis; ++m) {
      h1(i, m) = tmp[m];
      dh1(i, m) = m >= 1 ? std::sqrt(0.5 * m) * tmp[m - 1] : 0.0;
    }
  }

  WeightedBasis b;
  b.grid = grid;
  b.dim = n;
  b.size = N;
  b.per_axis = per_axis;
  const auto K = static_cast<Eigen::Index>(grid->size());
  b.values.resize(K, N);
  b.gradients.assign(static_cast<std::size_t>(n), Eigen::MatrixXd(K, N));
  b.ou_eigenvalues.resize(static_cast<std::size_t>(N));

  std::vector<int> idx(static_cast<std::size_t>(n));
  std::vector<int> node(static_cast<std::size_t>(n));
  for (int j = 0; j < N; ++j) {
    int rest = j, total = 0;
    for (int d = 0; d < n; ++d) {
      idx[d] = rest % per_axis;
      rest /= per_axis;
      total += idx[d];
    }
    b.ou_eigenvalues[j] = -0.5 * total;
    for (Eigen::Index k = 0; k < K; ++k) {
      for (int d = 0; d < n; ++d) node[d] = grid->axis_index(static_cast<std::size_t>(k), d);
      double v = 1.0;
      for (int d = 0; d < n; ++d) v *= h1(node[d], idx[d]);
      b.values(k, j) = v;
      for (int d = 0; d < n; ++d) {
        double g = dh1(node[d], idx[d]);
        for (int e = 0; e < n; ++e)
          if (e != d) g *= h1(node[e], idx[e]);
        b.gradients[d](k, j) = g;
      }
    }
  }
  return b;
}

WeightedBasis build_radial_basis(int n, int N, GridPtr grid) {
  if (n < 1) throw UsageError("basis dimension must be >= 1");
  if (N < 1) throw UsageError("basis size must be >= 1");
  if (!grid) grid = QuadratureGrid::radial(n, std::max(64, N));
  if (grid->kind() != GridKind::radial || grid->dim() != n) throw UsageError("radial basis needs a radial grid of dimension n");
  if (N > grid->degree()) {
    throw UsageError("radial basis of size " + std::to_string(N) + " exceeds quadrature exactness (degree " +
                     std::to_string(grid->degree()) + ")");
  }
  const double alpha = 0.5 * n - 1.0;
  const double norm = 1.0 / std::sqrt(unit_sphere_area(n) * std::pow(2.0, n - 1));

  WeightedBasis b;
  b.grid = grid;
  b.dim = n;
  b.size = N;
  b.per_axis = N;
  const auto K = static_cast<Eigen::Index>(grid->size());
  b.values.resize(K, N);
  b.gradients.assign(1, Eigen::MatrixXd(K, N));
  b.ou_eigenvalues.resize(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) b.ou_eigenvalues[j] = -static_cast<double>(j);

  std::vector<double> l(static_cast<std::size_t>(N));
  for (Eigen::Index k = 0; k < K; ++k) {
    const double r = grid->point(static_cast<std::size_t>(k))[0];
    const double t = 0.25 * r * r;
    laguerre_functions(t, alpha, l);
    for (int j = 0; j < N; ++j) {
      b.values(k, j) = norm * l[j];
      // d/dr = (r/2) d/dt and t l_j' = j l_j - sqrt(j(j+alpha)) l_{j-1}.
      const double tdl = j >= 1 ? j * l[j] - std::sqrt(j * (j + alpha)) * l[j - 1] : 0.0;
      b.gradients[0](k, j) = norm * 2.0 * tdl / r;
    }
  }
  return b;
}

double SpectralOperator::symmetry_residual() const {
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  return (matrix - matrix.transpose()).cwiseAbs().maxCoeff() / scale;
}

SpectralOperator assemble(const GridFunction& w, const WeightedBasis& basis, const ProblemParams& params) {
  params.validate();
  if (w.grid != basis.grid) throw UsageError("profile and basis must share a quadrature grid");
  if (!w.values.allFinite()) throw PreconditionError("profile must be bounded on the grid");

  const Eigen::VectorXd& weights = basis.grid->weights();
  const Eigen::VectorXd potential = linearized_potential(w.values, params.p);

  Eigen::MatrixXd a = basis.values.transpose() * (weights.array() * potential.array()).matrix().asDiagonal() *
                      basis.values;
  for (const auto& g : basis.gradients) a.noalias() -= g.transpose() * weights.asDiagonal() * g;

  SpectralOperator op;
  op.basis = basis;
  op.matrix = 0.5 * (a + a.transpose());
  op.profile = w;
  op.params = params;
  return op;
}

SpectrumReport spectrum(const SpectralOperator& op, int k) {
  const auto n = op.matrix.rows();
  if (k < 1 || k > n) throw UsageError("requested " + std::to_string(k) + " eigenvalues of a " + std::to_string(n) + "-dimensional operator");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.matrix);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eigensolver failed (info=" << int(solver.info()) << ", N=" << n
       << ", symmetry residual=" << op.symmetry_residual() << ")";
    throw NumericError(os.str());
  }
  SpectrumReport rep;
  rep.coefficients.resize(n, k);
  // L v = -lambda v: the smallest lambda belongs to the largest eigenvalue of A.
  for (int j = 0; j < k; ++j) {
    const Eigen::Index col = n - 1 - j;
    rep.eigenvalues.push_back(-solver.eigenvalues()[col]);
    rep.coefficients.col(j) = solver.eigenvectors().col(col);
  }
  return rep;
}

double first_eigenvalue_rayleigh(const SpectralOperator& op, double tol, int max_iterations) {
  const Eigen::MatrixXd b = -op.matrix;  // Rayleigh quotient numerator in the basis
  const auto n = b.rows();
  if (n == 0) throw UsageError("empty operator");
  if (n == 1) return b(0, 0);
  if (max_iterations <= 0) max_iterations = 20 * static_cast<int>(n) + 200;
  const double scale = std::max(1.0, b.cwiseAbs().rowwise().sum().maxCoeff());

  Eigen::VectorXd x(n);
  for (Eigen::Index j = 0; j < n; ++j) x[j] = 1.0 / (1.0 + static_cast<double>(j));
  x.normalize();
  Eigen::VectorXd bx = b * x;
  double theta = x.dot(bx);
  Eigen::VectorXd dir = Eigen::VectorXd::Zero(n);

  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd r = bx - theta * x;
    if (r.norm() <= tol * scale) break;

    // Orthonormal basis of span{x, r, dir}, dropping dependent directions.
    std::vector<Eigen::VectorXd> cols{x};
    for (const Eigen::VectorXd* cand : {&r, &dir}) {
      Eigen::VectorXd v = *cand;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& c : cols) v -= c.dot(v) * c;
      const double nv = v.norm();
      if (nv > 1e-10 * std::max(1.0, cand->norm())) cols.push_back(v / nv);
    }
    const auto m = static_cast<Eigen::Index>(cols.size());
    Eigen::MatrixXd s(n, m);
    for (Eigen::Index j = 0; j < m; ++j) s.col(j) = cols[j];
    const Eigen::MatrixXd bs = b * s;
    const Eigen::MatrixXd small = s.transpose() * bs;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (small + small.transpose()));
    const Eigen::VectorXd c = es.eigenvectors().col(0);

    dir = s.rightCols(m - 1) * c.tail(m - 1);
    x = s * c;
    const double nx = x.norm();
    x /= nx;
    bx = bs * c / nx;
    theta = x.dot(bx);
  }
  return theta;
}

int default_basis_size(const QuadratureGrid& grid) {
  if (grid.kind() == GridKind::radial) return std::min(32, grid.degree());
  switch (grid.dim()) {
    case 1: return std::min(32, grid.degree());
    case 2: { const int m = std::min(12, grid.degree()); return m * m; }
    default: { const int m = std::min(8, grid.degree()); return m * m * m; }
  }
}

namespace {

WeightedBasis basis_for(const GridFunction& w, int basis_size) {
  const int size = basis_size > 0 ? basis_size : default_basis_size(*w.grid);
  return w.grid->kind() == GridKind::radial ? build_radial_basis(w.grid->dim(), size, w.grid)
                                            : build_basis(w.grid->dim(), size, w.grid);
}

}  // namespace

SignChangeCheck theorem58_check(const GridFunction& w, const ProblemParams& params, int basis_size, double tol) {
  const HQuantity h = compute_H(w, params.p);
  SignChangeCheck out;
  out.h_changes_sign = h.changes_sign();
  out.h_min = h.min;
  out.h_max = h.max;
  const SpectralOperator op = assemble(w, basis_for(w, basis_size), params);
  out.lambda1 = spectrum(op, 1).eigenvalues.front();
  out.consistent = !out.h_changes_sign || out.lambda1 < -1.0 + tol;
  return out;
}

std::string to_string(ModeKind kind) {
  switch (kind) {
    case ModeKind::time_recentering: return "time-recentering";
    case ModeKind::space_recentering: return "space-recentering";
    case ModeKind::translation_eigenvalue: return "translation-eigenvalue";
    case ModeKind::unexplained: return "unexplained";
  }
  return "unknown";
}

StabilityReport stability_classify(const GridFunction& w, const ProblemParams& params, int basis_size,
                                   double span_tol) {
  if (!w.gradient) throw UsageError("stability classification needs gradient samples of w");
  const SpectralOperator op = assemble(w, basis_for(w, basis_size), params);
  const SpectrumReport spec = spectrum(op, op.basis.size);
  const Eigen::VectorXd& weights = w.grid->weights();

  const HQuantity h = compute_H(w, params.p);
  const double wscale = 1.0 + weighted_l2(w.values, weights);
  auto nonzero = [&](const Eigen::VectorXd& v) { return weighted_l2(v, weights) > 1e-12 * wscale; };

  std::vector<Eigen::VectorXd> time_span;
  if (nonzero(h.values)) time_span.push_back(h.values);
  std::vector<Eigen::VectorXd> full_span = time_span;
  bool translations_vanish = true;
  const bool radial = w.grid->kind() == GridKind::radial;
  if (!radial) {
    for (Eigen::Index d = 0; d < w.gradient->cols(); ++d) {
      Eigen::VectorXd wi = w.gradient->col(d);
      if (nonzero(wi)) {
        full_span.push_back(std::move(wi));
        translations_vanish = false;
      }
    }
  }

  StabilityReport rep;
  rep.eigenvalues = spec.eigenvalues;
  rep.linearly_stable = true;
  for (std::size_t j = 0; j < spec.eigenvalues.size(); ++j) {
    const double lambda = spec.eigenvalues[j];
    if (!(lambda < -1e-9)) break;
    const Eigen::VectorXd v = op.basis.synthesize(spec.coefficients.col(static_cast<Eigen::Index>(j)));
    const double vn = weighted_l2(v, weights);
    UnstableMode mode;
    mode.eigenvalue = lambda;
    const double time_res = weighted_l2(project_out(time_span, v, weights), weights) / vn;
    mode.projection_residual = weighted_l2(project_out(full_span, v, weights), weights) / vn;
    if (time_res < span_tol) {
      mode.kind = ModeKind::time_recentering;
      mode.projection_residual = time_res;
    } else if (mode.projection_residual < span_tol) {
      mode.kind = ModeKind::space_recentering;
    } else if (!radial && translations_vanish && std::abs(lambda + 0.5) < 1e-6) {
      mode.kind = ModeKind::translation_eigenvalue;
    } else {
      mode.kind = ModeKind::unexplained;
      rep.linearly_stable = false;
    }
    rep.unstable_modes.push_back(mode);
  }

  std::ostringstream note;
  if (radial) note << "radial sector only; translation modes are not radial. ";
  const bool ambiguous = std::any_of(rep.unstable_modes.begin(), rep.unstable_modes.end(),
                                     [](const UnstableMode& m) { return m.kind == ModeKind::translation_eigenvalue; });
  if (ambiguous) {
    note << "every d_i w vanishes, so the lambda=-1/2 eigenfunctions are counted as translation modes; "
            "a literal reading of span{H, d_i w} would reject them.";
  }
  rep.note = note.str();
  return rep;
}

}  // namespace sslab
