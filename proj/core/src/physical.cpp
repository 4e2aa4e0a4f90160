#include "sslab/physical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sslab/errors.hpp"

namespace sslab {

namespace {

double max_value(const Eigen::VectorXd& u) { return u.size() ? u.maxCoeff() : 0.0; }

// Exact flow of u' = |u|^{p-1} u over dt; requires (p-1) dt |u|^{p-1} < 1.
double reaction_flow(double u, double p, double dt) {
  const double q = 1.0 - (p - 1.0) * dt * std::pow(std::abs(u), p - 1.0);
  return u * std::pow(q, -1.0 / (p - 1.0));
}

// Second-order Laplacian rows; boundary rows are left for the caller.
void laplacian_rows(const PhysicalDomain& d, std::vector<double>& lo, std::vector<double>& mid,
                    std::vector<double>& up) {
  const std::size_t m = static_cast<std::size_t>(d.cells) + 1;
  const double h = d.spacing();
  const double ih2 = 1.0 / (h * h);
  lo.assign(m, 0.0);
  mid.assign(m, 0.0);
  up.assign(m, 0.0);
  if (!d.radial()) {
    for (std::size_t i = 1; i + 1 < m; ++i) {
      lo[i] = ih2;
      mid[i] = -2.0 * ih2;
      up[i] = ih2;
    }
    return;
  }
  const double n = d.dim;
  mid[0] = -2.0 * n * ih2;
  up[0] = 2.0 * n * ih2;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double r = h * static_cast<double>(i);
    const double jm = std::pow((r - 0.5 * h) / r, n - 1.0);
    const double jp = std::pow((r + 0.5 * h) / r, n - 1.0);
    lo[i] = jm * ih2;
    up[i] = jp * ih2;
    mid[i] = -(jm + jp) * ih2;
  }
}

void solve_tridiagonal(std::vector<double> lower, std::vector<double> diag, const std::vector<double>& upper,
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

// Cubic Hermite interpolation of mesh data with centered-difference slopes.
double interpolate(const Eigen::VectorXd& u, double lo, double h, double x, bool even_at_lo) {
  const auto m = static_cast<std::size_t>(u.size());
  auto slope = [&](std::size_t i) {
    const auto k = static_cast<Eigen::Index>(i);
    if (i == 0) return even_at_lo ? 0.0 : (u[1] - u[0]) / h;
    if (i + 1 == m) return (u[k] - u[k - 1]) / h;
    return (u[k + 1] - u[k - 1]) / (2.0 * h);
  };
  const double pos = std::clamp((x - lo) / h, 0.0, static_cast<double>(m - 1));
  const auto i = std::min(static_cast<std::size_t>(pos), m - 2);
  const double t = pos - static_cast<double>(i);
  const auto k = static_cast<Eigen::Index>(i);
  const double w0 = u[k], w1 = u[k + 1];
  const double d0 = slope(i) * h, d1 = slope(i + 1) * h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * w0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * w1 + (t3 - t2) * d1;
}

}  // namespace

double PhysicalDomain::spacing() const { return (radial() ? R : 2.0 * R) / cells; }

std::vector<double> PhysicalDomain::nodes() const {
  const double h = spacing();
  const double lo = radial() ? 0.0 : -R;
  std::vector<double> x(static_cast<std::size_t>(cells) + 1);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = lo + h * static_cast<double>(i);
  x.back() = R;
  return x;
}

BlowupRun solve_physical(const std::function<double(double)>& u0, const PhysicalDomain& domain,
                         const ProblemParams& params, const BlowupOptions& options) {
  params.validate();
  if (domain.dim != params.n) throw UsageError("solve_physical: domain and problem dimensions differ");
  if (!(domain.R > 0.0) || domain.cells < 4) throw UsageError("solve_physical: need R > 0 and cells >= 4");
  if (!(options.dt_factor > 0.0 && options.dt_factor < 1.0))
    throw UsageError("solve_physical: dt_factor must lie in (0, 1)");
  if (!(options.dt_max > 0.0) || !(options.u_cap > 0.0) || !(options.t_max > 0.0) ||
      !(options.snapshot_ratio > 1.0))
    throw UsageError("solve_physical: dt_max, u_cap, t_max must be positive and snapshot_ratio > 1");

  const double p = params.p;
  BlowupRun run;
  run.params = params;
  run.domain = domain;
  run.options = options;
  const std::vector<double> x = domain.nodes();
  const auto m = static_cast<Eigen::Index>(x.size());
  run.u.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) run.u[i] = u0(x[static_cast<std::size_t>(i)]);
  if (!run.u.allFinite()) throw DomainError("solve_physical: initial data is not finite");
  if (run.u.minCoeff() < 0.0) throw DomainError("solve_physical: initial data must be nonnegative");
  if (options.diffusion) {
    if (!domain.radial()) run.u[0] = 0.0;
    run.u[m - 1] = 0.0;
  }

  std::vector<double> lo, mid, up;
  laplacian_rows(domain, lo, mid, up);
  {
    const double scale = std::max(1.0, std::pow(max_value(run.u), p));
    bool ok = true;
    for (Eigen::Index i = domain.radial() ? 0 : 1; i + 1 < m; ++i) {
      const auto k = static_cast<std::size_t>(i);
      double lap = mid[k] * run.u[i] + up[k] * run.u[i + 1];
      if (i > 0) lap += lo[k] * run.u[i - 1];
      if (lap + std::pow(run.u[i], p) < -1e-9 * scale) ok = false;
    }
    run.initial_speed_nonnegative = ok;
  }

  // Backward-Euler matrix I - dt Δ with identity rows on Dirichlet nodes.
  auto diffusion_step = [&](double dt) {
    std::vector<double> l(lo.size()), d(mid.size()), u(up.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      l[i] = -dt * lo[i];
      d[i] = 1.0 - dt * mid[i];
      u[i] = -dt * up[i];
    }
    if (!domain.radial()) {
      d.front() = 1.0;
      u.front() = 0.0;
      run.u[0] = 0.0;
    }
    d.back() = 1.0;
    l.back() = 0.0;
    run.u[m - 1] = 0.0;
    solve_tridiagonal(std::move(l), std::move(d), u, run.u);
  };

  run.min_u = run.u.minCoeff();
  double level = max_value(run.u);
  run.sup_history.emplace_back(0.0, level);
  run.snapshots.push_back({0.0, run.u});
  level = std::max(level, std::numeric_limits<double>::min()) * options.snapshot_ratio;

  const double slack = std::min(1.0, 1.0 / (p - 1.0));
  while (true) {
    const double M = max_value(run.u);
    if (M >= options.u_cap) {
      run.blew_up = true;
      break;
    }
    if (run.t >= options.t_max * (1.0 - 1e-14)) {
      run.global_existence = true;
      break;
    }
    double dt = options.dt_max;
    if (M > 0.0) dt = std::min(dt, options.dt_factor * slack * std::pow(M, 1.0 - p));
    dt = std::min(dt, options.t_max - run.t);
    // Below this step T - t is no longer resolved next to t, and the type-I fit degrades.
    if (M > 0.0 && dt < 1e-10 * std::max(1.0, run.t) && run.t + dt < options.t_max) {
      run.blew_up = true;
      run.note = "stopped at max u = " + std::to_string(M) + ": time step below the resolution of t";
      break;
    }
    for (Eigen::Index i = 0; i < m; ++i) run.u[i] = reaction_flow(run.u[i], p, dt);
    if (options.diffusion) diffusion_step(dt);
    if (!run.u.allFinite()) throw NumericError("solve_physical: non-finite values at t=" + std::to_string(run.t));
    run.t += dt;
    ++run.steps;
    run.min_u = std::min(run.min_u, run.u.minCoeff());
    const double Mn = max_value(run.u);
    run.sup_history.emplace_back(run.t, Mn);
    if (Mn >= level || Mn >= options.u_cap) {
      run.snapshots.push_back({run.t, run.u});
      while (level <= Mn) level *= options.snapshot_ratio;
    }
    if (run.steps > 100'000'000) throw NumericError("solve_physical: step budget exhausted");
  }
  if (run.snapshots.back().t < run.t) run.snapshots.push_back({run.t, run.u});

  if (run.blew_up) {
    run.fit = fit_type_one(run.sup_history);
    run.T_est = run.fit->T;
    Eigen::Index imax = 0;
    run.u.maxCoeff(&imax);
    double a = x[static_cast<std::size_t>(imax)];
    // Vertex of the parabola through the maximum and its neighbours.
    if (!domain.radial() && imax > 0 && imax + 1 < m) {
      const double um = run.u[imax - 1], u0c = run.u[imax], up1 = run.u[imax + 1];
      const double den = um - 2.0 * u0c + up1;
      if (den < 0.0) a += 0.5 * domain.spacing() * (um - up1) / den;
    }
    run.a_est = a;
  } else {
    run.note = "global existence up to t_max";
  }
  return run;
}

TypeIFit fit_type_one(const std::vector<std::pair<double, double>>& hist) {
  if (hist.empty()) throw PreconditionError("fit_type_one: empty history");
  const double m_last = hist.back().second;
  std::vector<double> ts, ys;
  for (const auto& [t, M] : hist) {
    if (M >= m_last / 10.0 && M > 0.0) {
      ts.push_back(t);
      ys.push_back(std::log(M));
    }
  }
  if (ts.size() < 8) throw PreconditionError("fit_type_one: fewer than 8 samples in the last decade of growth");
  const double t_last = ts.back();
  const double span = std::max(t_last - ts.front(), 1e-300);

  // Linear least squares for fixed T; returns the residual sum of squares.
  auto solve = [&](double T, double& logC, double& beta) {
    const auto k = static_cast<double>(ts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double xi = -std::log(T - ts[i]);
      sx += xi;
      sy += ys[i];
      sxx += xi * xi;
      sxy += xi * ys[i];
    }
    const double det = k * sxx - sx * sx;
    beta = (k * sxy - sx * sy) / det;
    logC = (sy - beta * sx) / k;
    double rss = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double r = ys[i] - logC - beta * (-std::log(T - ts[i]));
      rss += r * r;
    }
    return rss;
  };
  auto objective = [&](double v) {
    double c, b;
    return solve(t_last + std::exp(v), c, b);
  };

  // Coarse scan in v = log(T - t_last), then golden-section refinement.
  const double v_lo = std::log(span) - 40.0;
  const double v_hi = std::log(span) + 5.0;
  const int coarse = 400;
  int best = 0;
  double best_f = INFINITY;
  for (int i = 0; i <= coarse; ++i) {
    const double v = v_lo + (v_hi - v_lo) * i / coarse;
    const double f = objective(v);
    if (f < best_f) {
      best_f = f;
      best = i;
    }
  }
  const double dv = (v_hi - v_lo) / coarse;
  double a = v_lo + dv * (best - 1), b = v_lo + dv * (best + 1);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = objective(c), fd = objective(d);
  for (int it = 0; it < 200 && (b - a) > 1e-14; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = objective(d);
    }
  }
  TypeIFit fit;
  fit.T = t_last + std::exp(0.5 * (a + b));
  const double rss = solve(fit.T, fit.log_C, fit.exponent);
  fit.samples = ts.size();
  fit.rms_residual = std::sqrt(rss / static_cast<double>(ts.size()));
  return fit;
}

RescaledSample rescale_to_similarity(const PhysicalSnapshot& snap, const PhysicalDomain& domain,
                                     const ProblemParams& params, double a, double T, const std::vector<double>& y) {
  params.validate();
  if (!(snap.t < T)) throw DomainError("rescale_to_similarity: need t < T");
  if (domain.radial() && a != 0.0) throw UsageError("rescale_to_similarity: radial runs are centred at a = 0");
  const double tau = T - snap.t;
  const double root = std::sqrt(tau);
  const double amp = std::pow(tau, 1.0 / (params.p - 1.0));
  const double lo = domain.radial() ? 0.0 : -domain.R;
  const double h = domain.spacing();
  RescaledSample out;
  out.s = -std::log(tau);
  out.y = y;
  out.w.resize(y.size());
  out.valid.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double xi = a + y[i] * root;
    const bool inside = domain.radial() ? (y[i] >= 0.0 && xi <= domain.R) : (xi >= -domain.R && xi <= domain.R);
    out.valid[i] = inside;
    if (!inside) {
      out.w[i] = std::numeric_limits<double>::quiet_NaN();
      ++out.masked;
      continue;
    }
    out.w[i] = amp * interpolate(snap.u, lo, h, xi, domain.radial());
  }
  return out;
}

Theorem13Report theorem13_pipeline(const BlowupRun& run, const Theorem13Options& opt) {
  if (!run.blew_up || !run.T_est || !run.a_est)
    throw PreconditionError("theorem13_pipeline: the run did not blow up (no T or a estimate)");
  if (!(opt.K > 0.0) || opt.y_points < 5) throw UsageError("theorem13_pipeline: need K > 0 and y_points >= 5");
  const double p = run.params.p;
  const double k = kappa(p);
  Theorem13Report rep;
  rep.T = *run.T_est;
  rep.a = *run.a_est;
  const bool radial = run.domain.radial();

  std::vector<double> y(static_cast<std::size_t>(opt.y_points));
  const double y_lo = radial ? 0.0 : -opt.K;
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = y_lo + (opt.K - y_lo) * static_cast<double>(i) / static_cast<double>(y.size() - 1);
  const double dy = y[1] - y[0];

  for (const PhysicalSnapshot& snap : run.snapshots) {
    const double tau = rep.T - snap.t;
    if (!(tau > 0.0)) continue;
    const double s = -std::log(tau);
    const double spacing = run.domain.spacing() / std::sqrt(tau);
    if (spacing > opt.max_y_spacing || s < opt.s_min) continue;
    const RescaledSample w = rescale_to_similarity(snap, run.domain, run.params, rep.a, rep.T, y);
    Theorem13Point pt;
    pt.t = snap.t;
    pt.s = s;
    pt.y_spacing = spacing;
    pt.masked = w.masked;
    pt.min_H = INFINITY;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (!w.valid[i]) continue;
      pt.sup_dev = std::max(pt.sup_dev, std::abs(w.w[i] - k));
      double wy;
      const bool left = i > 0 && w.valid[i - 1];
      const bool right = i + 1 < y.size() && w.valid[i + 1];
      if (left && right) {
        wy = (w.w[i + 1] - w.w[i - 1]) / (2.0 * dy);
      } else if (right) {
        wy = (w.w[i + 1] - w.w[i]) / dy;
      } else if (left) {
        wy = (w.w[i] - w.w[i - 1]) / dy;
      } else {
        wy = 0.0;
      }
      pt.min_H = std::min(pt.min_H, w.w[i] / (p - 1.0) + 0.5 * y[i] * wy);
    }
    rep.points.push_back(pt);
  }
  if (static_cast<int>(rep.points.size()) < opt.min_snapshots)
    throw PreconditionError("theorem13_pipeline: fewer than " + std::to_string(opt.min_snapshots) +
                            " resolved snapshots before T");

  const std::size_t N = rep.points.size();
  std::size_t tail = 1;
  while (tail < N && rep.points[N - tail - 1].sup_dev > rep.points[N - tail].sup_dev) ++tail;
  rep.decreasing_tail = static_cast<int>(tail);
  rep.converged = rep.decreasing_tail >= opt.min_snapshots && rep.points.back().sup_dev < opt.conv_tol;
  rep.H_nonnegative = std::all_of(rep.points.begin(), rep.points.end(),
                                  [&](const Theorem13Point& q) { return q.min_H >= -opt.h_tol; });
  rep.note = "C^0 distance on |y| <= K at finite s; higher norms are not checked";
  return rep;
}

BlowupRun synthetic_exact_run(const ProblemParams& params, const PhysicalDomain& domain, double T,
                              const std::vector<double>& times) {
  params.validate();
  if (times.empty()) throw UsageError("synthetic_exact_run: no times");
  const double p = params.p;
  const double k = kappa(p);
  BlowupRun run;
  run.params = params;
  run.domain = domain;
  const auto m = static_cast<Eigen::Index>(domain.cells) + 1;
  for (double t : times) {
    if (!(t < T)) throw DomainError("synthetic_exact_run: times must precede T");
    const double M = k * std::pow(T - t, -1.0 / (p - 1.0));
    run.sup_history.emplace_back(t, M);
    run.snapshots.push_back({t, Eigen::VectorXd::Constant(m, M)});
  }
  run.t = times.back();
  run.u = run.snapshots.back().u;
  run.blew_up = true;
  run.fit = fit_type_one(run.sup_history);
  run.T_est = run.fit->T;
  run.a_est = 0.0;
  run.min_u = run.sup_history.front().second;
  run.note = "synthetic exact solution";
  return run;
}

}  // namespace sslab
