#include "sslab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sslab/errors.hpp"

namespace sslab {

namespace {

double density(double r) { return std::exp(-0.25 * r * r); }

// Solves the tridiagonal system (lower, diag, upper) x = rhs in place of rhs.
void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag, std::vector<double>& upper,
                       Eigen::VectorXd& rhs) {
  const std::size_t m = diag.size();
  for (std::size_t i = 1; i < m; ++i) {
    const double f = lower[i] / diag[i - 1];
    diag[i] -= f * upper[i - 1];
    rhs[static_cast<Eigen::Index>(i)] -= f * rhs[static_cast<Eigen::Index>(i - 1)];
  }
  rhs[static_cast<Eigen::Index>(m - 1)] /= diag[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) {
    const auto k = static_cast<Eigen::Index>(i);
    rhs[k] = (rhs[k] - upper[i] * rhs[k + 1]) / diag[i];
  }
}

// (|1+z|^{p-1}(1+z) - 1)/(p-1), exactly 0 at z = 0.
double reaction(double z, double p) {
  const double v = 1.0 + z;
  if (v > 0.0) return std::expm1(p * std::log1p(z)) / (p - 1.0);
  return (std::pow(std::abs(v), p - 1.0) * v - 1.0) / (p - 1.0);
}

double power_term(double w, double p) { return std::pow(std::abs(w), p + 1.0) / (p + 1.0); }

}  // namespace

RescaledMesh RescaledMesh::make(int dim, double L, int cells) {
  if (dim < 1) throw DomainError("rescaled mesh: dimension must be >= 1");
  if (!(L > 0.0)) throw UsageError("rescaled mesh: L must be positive");
  if (cells < 4) throw UsageError("rescaled mesh: need at least 4 cells");
  RescaledMesh mesh;
  mesh.dim = dim;
  mesh.L = L;
  mesh.cells = cells;
  const bool radial = dim >= 2;
  const double lo = radial ? 0.0 : -L;
  const double h = (L - lo) / cells;
  const auto nodes = static_cast<std::size_t>(cells) + 1;
  mesh.y.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) mesh.y[i] = lo + h * static_cast<double>(i);
  mesh.y.back() = L;

  const double n = dim;
  // int_a^b r^{n-1} dr for the radial measure, b - a on the line.
  auto shell = [&](double a, double b) {
    if (!radial) return b - a;
    return (std::pow(b, n) - std::pow(a, n)) / n;
  };
  mesh.mass.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double a = std::max(lo, mesh.y[i] - 0.5 * h);
    const double b = std::min(L, mesh.y[i] + 0.5 * h);
    mesh.mass[i] = density(mesh.y[i]) * shell(a, b);
  }
  mesh.conductance.resize(nodes - 1);
  for (std::size_t f = 0; f + 1 < nodes; ++f) {
    const double rf = 0.5 * (mesh.y[f] + mesh.y[f + 1]);
    const double jac = radial ? std::pow(rf, n - 1.0) : 1.0;
    mesh.conductance[f] = jac * density(rf) / h;
  }
  const double sphere = radial ? unit_sphere_area(dim) : 1.0;
  mesh.normalization = sphere * std::pow(4.0 * std::numbers::pi, -0.5 * n);
  return mesh;
}

Eigen::VectorXd RescaledMesh::apply_ou(const Eigen::VectorXd& w) const {
  const auto m = static_cast<Eigen::Index>(size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
  for (Eigen::Index f = 0; f + 1 < m; ++f) {
    const double flux = conductance[static_cast<std::size_t>(f)] * (w[f + 1] - w[f]);
    out[f] += flux;
    out[f + 1] -= flux;
  }
  for (Eigen::Index i = 0; i < m; ++i) out[i] /= mass[static_cast<std::size_t>(i)];
  return out;
}

double RescaledMesh::integrate(const Eigen::VectorXd& f) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < size(); ++i) acc += mass[i] * f[static_cast<Eigen::Index>(i)];
  return normalization * acc;
}

EnergyValue energy(const GridFunction& w, const ProblemParams& params) {
  params.validate();
  if (!w.grid) throw UsageError("energy: grid function has no grid");
  if (!w.has_gradient()) throw PreconditionError("energy: gradient samples are required");
  const double p = params.p;
  const QuadratureGrid& grid = *w.grid;
  const double norm = std::pow(4.0 * std::numbers::pi, -0.5 * grid.dim());
  const Eigen::VectorXd g2 = w.gradient_sq();
  EnergyValue e;
  for (Eigen::Index k = 0; k < w.values.size(); ++k) {
    const double wk = grid.weights()[k] * norm;
    const double v = w.values[k];
    e.dirichlet += wk * 0.5 * g2[k];
    e.quadratic += wk * v * v / (2.0 * (p - 1.0));
    e.potential += wk * power_term(v, p);
  }
  e.E = e.dirichlet + e.quadratic - e.potential;
  return e;
}

EnergyValue energy(const RescaledMesh& mesh, const Eigen::VectorXd& w, const ProblemParams& params) {
  const double p = params.p;
  EnergyValue e;
  for (std::size_t f = 0; f < mesh.conductance.size(); ++f) {
    const auto i = static_cast<Eigen::Index>(f);
    const double d = w[i + 1] - w[i];
    e.dirichlet += 0.5 * mesh.conductance[f] * d * d;
  }
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    const double v = w[static_cast<Eigen::Index>(i)];
    e.quadratic += mesh.mass[i] * v * v / (2.0 * (p - 1.0));
    e.potential += mesh.mass[i] * power_term(v, p);
  }
  e.dirichlet *= mesh.normalization;
  e.quadratic *= mesh.normalization;
  e.potential *= mesh.normalization;
  e.E = e.dirichlet + e.quadratic - e.potential;
  return e;
}

EvolutionState make_rescaled_state(const ProblemParams& params, double L, int cells,
                                   const std::function<double(double)>& w0, std::size_t record_every) {
  params.validate();
  if (record_every < 1) throw UsageError("record_every must be >= 1");
  EvolutionState st;
  st.params = params;
  st.mesh = RescaledMesh::make(params.n, L, cells);
  st.w.resize(static_cast<Eigen::Index>(st.mesh.size()));
  for (std::size_t i = 0; i < st.mesh.size(); ++i) st.w[static_cast<Eigen::Index>(i)] = w0(st.mesh.y[i]);
  if (!st.w.allFinite()) throw DomainError("initial rescaled data is not finite");
  st.record_every = record_every;
  st.cap = 1e6 * std::max(1.0, kappa(params.p));
  st.energy_history.emplace_back(0.0, energy(st.mesh, st.w, params).E);
  st.snapshots.push_back({0.0, st.w});
  return st;
}

void step_rescaled(EvolutionState& st, double ds) {
  if (!(ds > 0.0)) throw UsageError("step_rescaled: ds must be positive");
  if (st.halted) return;
  const double p = st.params.p;
  const double k = kappa(p);
  const RescaledMesh& mesh = st.mesh;
  const std::size_t m = mesh.size();

  Eigen::VectorXd z(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    z[ii] = st.w[ii] / k - 1.0;
  }
  Eigen::VectorXd rhs = z;
  for (Eigen::Index i = 0; i < rhs.size(); ++i) rhs[i] += ds * reaction(z[i], p);

  std::vector<double> lower(m, 0.0), diag(m, 1.0 + ds / (p - 1.0)), upper(m, 0.0);
  for (std::size_t f = 0; f + 1 < m; ++f) {
    const double a = ds * mesh.conductance[f];
    diag[f] += a / mesh.mass[f];
    upper[f] = -a / mesh.mass[f];
    diag[f + 1] += a / mesh.mass[f + 1];
    lower[f + 1] = -a / mesh.mass[f + 1];
  }
  solve_tridiagonal(lower, diag, upper, rhs);

  Eigen::VectorXd next(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < next.size(); ++i) next[i] = k * (1.0 + rhs[i]);
  if (!next.allFinite() || next.cwiseAbs().maxCoeff() > st.cap) {
    st.halted = true;
    st.event = "blew-up: |w| exceeded the cap at s=" + std::to_string(st.s + ds);
    return;
  }
  st.w = std::move(next);
  st.s += ds;
  ++st.steps;
  st.energy_history.emplace_back(st.s, energy(mesh, st.w, st.params).E);
  if (st.steps % st.record_every == 0) st.snapshots.push_back({st.s, st.w});
}

void evolve_rescaled(EvolutionState& st, double ds, double s_end) {
  if (!(ds > 0.0)) throw UsageError("evolve_rescaled: ds must be positive");
  while (!st.halted && st.s < s_end - 1e-12 * std::max(1.0, std::abs(s_end))) {
    step_rescaled(st, std::min(ds, s_end - st.s));
  }
}

DissipationCheck dissipation_check(const EvolutionState& tr, double s_a, double s_b) {
  if (!(s_b > s_a)) throw UsageError("dissipation_check: need s_a < s_b");
  const double eps = 1e-12 * std::max(1.0, std::abs(s_b));
  std::vector<const Snapshot*> snaps;
  for (const Snapshot& sn : tr.snapshots)
    if (sn.s >= s_a - eps && sn.s <= s_b + eps) snaps.push_back(&sn);
  if (snaps.size() < 5)
    throw PreconditionError("dissipation_check: fewer than 5 stored snapshots in [s_a, s_b]");

  const std::size_t m = snaps.size();
  std::vector<double> rate(m);
  for (std::size_t i = 0; i < m; ++i) {
    Eigen::VectorXd ws;
    if (i == 0) {
      const double d = snaps[1]->s - snaps[0]->s;
      ws = (-3.0 * snaps[0]->w + 4.0 * snaps[1]->w - snaps[2]->w) / (2.0 * d);
    } else if (i + 1 == m) {
      const double d = snaps[m - 1]->s - snaps[m - 2]->s;
      ws = (3.0 * snaps[m - 1]->w - 4.0 * snaps[m - 2]->w + snaps[m - 3]->w) / (2.0 * d);
    } else {
      ws = (snaps[i + 1]->w - snaps[i - 1]->w) / (snaps[i + 1]->s - snaps[i - 1]->s);
    }
    rate[i] = tr.mesh.integrate(ws.cwiseAbs2());
  }
  DissipationCheck out;
  out.samples = m;
  for (std::size_t i = 0; i + 1 < m; ++i) out.lhs += 0.5 * (rate[i] + rate[i + 1]) * (snaps[i + 1]->s - snaps[i]->s);
  out.rhs = energy(tr.mesh, snaps.front()->w, tr.params).E - energy(tr.mesh, snaps.back()->w, tr.params).E;
  out.rel_err = std::abs(out.lhs - out.rhs) / std::max(std::abs(out.rhs), 1e-12);
  return out;
}

GridFunction state_on_grid(const EvolutionState& st, const GridPtr& grid) {
  if (!grid) throw UsageError("state_on_grid: null grid");
  const RescaledMesh& mesh = st.mesh;
  const bool radial = mesh.dim >= 2;
  if (radial != (grid->kind() == GridKind::radial) || grid->dim() != mesh.dim)
    throw UsageError("state_on_grid: grid kind or dimension does not match the mesh");
  const std::size_t m = mesh.size();
  const double h = mesh.spacing();
  std::vector<double> slope(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    if (i == 0) {
      slope[i] = radial ? 0.0 : (st.w[1] - st.w[0]) / h;
    } else if (i + 1 == m) {
      slope[i] = 0.0;
    } else {
      slope[i] = (st.w[k + 1] - st.w[k - 1]) / (2.0 * h);
    }
  }
  const double n = mesh.dim;
  GridFunction f;
  f.grid = grid;
  const auto K = static_cast<Eigen::Index>(grid->size());
  f.values.resize(K);
  f.gradient = Eigen::MatrixXd::Zero(K, 1);
  f.laplacian = Eigen::VectorXd::Zero(K);
  const double lo = mesh.y.front();
  for (Eigen::Index q = 0; q < K; ++q) {
    const double y = grid->point(static_cast<std::size_t>(q))[0];
    if (y <= lo || y >= mesh.L) {
      f.values[q] = y >= mesh.L ? st.w[static_cast<Eigen::Index>(m - 1)] : st.w[0];
      continue;
    }
    const auto i = std::min(static_cast<std::size_t>((y - lo) / h), m - 2);
    const auto k = static_cast<Eigen::Index>(i);
    const double t = (y - mesh.y[i]) / h;
    const double w0 = st.w[k], w1 = st.w[k + 1];
    const double d0 = slope[i] * h, d1 = slope[i + 1] * h;
    const double t2 = t * t, t3 = t2 * t;
    const double val = (2 * t3 - 3 * t2 + 1) * w0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * w1 + (t3 - t2) * d1;
    const double dv = ((6 * t2 - 6 * t) * w0 + (3 * t2 - 4 * t + 1) * d0 + (-6 * t2 + 6 * t) * w1 + (3 * t2 - 2 * t) * d1) / h;
    const double d2v = ((12 * t - 6) * w0 + (6 * t - 4) * d0 + (-12 * t + 6) * w1 + (6 * t - 2) * d1) / (h * h);
    f.values[q] = val;
    (*f.gradient)(q, 0) = dv;
    (*f.laplacian)[q] = d2v + (radial && y > 0.0 ? (n - 1.0) / y * dv : 0.0);
  }
  return f;
}

double distance_to_kappa(const EvolutionState& st) {
  return (st.w.array() - kappa(st.params.p)).abs().maxCoeff();
}

}  // namespace sslab
