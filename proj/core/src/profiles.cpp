#include "sslab/profiles.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <thread>
#include <tuple>

namespace sslab {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;

// The equation is integrated for v = w/kappa:
//   v_rr + ((n-1)/r - r/2) v_r + g(v) = 0,  g(v) = (v^p - v)/(p-1),
// with g evaluated so that g(1) = 0 exactly and the constant profile is a fixed point.
double nonlinearity(double v, double p) {
  if (v > 0.0) return v * std::expm1((p - 1.0) * std::log(v)) / (p - 1.0);
  return (std::pow(std::abs(v), p - 1.0) * v - v) / (p - 1.0);
}

double nonlinearity_slope(double v, double p) {
  return (p * std::pow(std::abs(v), p - 1.0) - 1.0) / (p - 1.0);
}

// State is (u, u_r) with v = v0 + u, so error control acts on the departure
// from the initial value and stays relative inside a steep core.
struct RadialSystem {
  double n;
  double p;
  double v0;
  void operator()(const State& x, State& dxdr, double r) const {
    dxdr[0] = x[1];
    dxdr[1] = -((n - 1.0) / r - 0.5 * r) * x[1] - nonlinearity(v0 + x[0], p);
  }
};

// Fourth-order first derivative on a uniform mesh.
std::vector<double> differentiate(const std::vector<double>& f, double h, std::size_t count) {
  std::vector<double> d(count);
  const double s = 1.0 / (12.0 * h);
  for (std::size_t i = 0; i < count; ++i) {
    if (i >= 2 && i + 2 < count) {
      d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * s;
    } else if (i == 0) {
      d[i] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * s;
    } else if (i == 1) {
      d[i] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * s;
    } else if (i + 2 == count) {
      const std::size_t e = count - 1;
      d[i] = (3.0 * f[e] + 10.0 * f[e - 1] - 18.0 * f[e - 2] + 6.0 * f[e - 3] - f[e - 4]) * s;
    } else {
      const std::size_t e = count - 1;
      d[i] = (25.0 * f[e] - 48.0 * f[e - 1] + 36.0 * f[e - 2] - 16.0 * f[e - 3] + 3.0 * f[e - 4]) * s;
    }
  }
  return d;
}

std::vector<double> graded_mesh(double h, double core, double r_max) {
  double s = h;
  while (s > core) s *= 0.5;
  std::vector<double> mesh{0.0};
  for (; s < h; s *= 2.0) {
    const double base = mesh.back();
    for (int i = 1; i <= 64; ++i) mesh.push_back(base + i * s);
  }
  const double base = mesh.back();
  for (std::size_t i = 1;; ++i) {
    const double r = base + static_cast<double>(i) * h;
    if (r > r_max * (1.0 + 1e-12)) break;
    mesh.push_back(r);
  }
  if (mesh.back() < r_max * (1.0 - 1e-12)) mesh.push_back(r_max);
  return mesh;
}

// Maximal index ranges [first, last) of equal spacing; consecutive runs share
// their boundary point.
std::vector<std::pair<std::size_t, std::size_t>> uniform_runs(const std::vector<double>& r) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t a = 0;
  while (a + 1 < r.size()) {
    const double h = r[a + 1] - r[a];
    std::size_t b = a + 2;
    while (b < r.size() && std::abs((r[b] - r[b - 1]) - h) <= 1e-9 * h) ++b;
    runs.emplace_back(a, b);
    a = b - 1;
  }
  return runs;
}

// Cubic Hermite interpolation of (w, w_r) at r inside the stored mesh.
std::pair<double, double> hermite_sample(const RadialProfile& prof, double r) {
  const auto it = std::upper_bound(prof.r.begin(), prof.r.end(), r);
  auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - prof.r.begin(), 1) - 1);
  i = std::min(i, prof.r.size() - 2);
  const double h = prof.r[i + 1] - prof.r[i];
  const double t = (r - prof.r[i]) / h;
  const double w0 = prof.w[i], w1 = prof.w[i + 1];
  const double d0 = prof.w_r[i] * h, d1 = prof.w_r[i + 1] * h;
  const double t2 = t * t, t3 = t2 * t;
  const double w = (2 * t3 - 3 * t2 + 1) * w0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * w1 + (t3 - t2) * d1;
  const double wr =
      ((6 * t2 - 6 * t) * w0 + (3 * t2 - 4 * t + 1) * d0 + (-6 * t2 + 6 * t) * w1 + (3 * t2 - 2 * t) * d1) / h;
  return {w, wr};
}

int count_turning_points(const RadialProfile& prof, double r_start) {
  int turns = 0;
  int sign = 0;
  for (std::size_t i = 0; i < prof.r.size(); ++i) {
    if (prof.r[i] <= r_start) continue;
    const double floor = 1e-12 * std::max(1.0, std::abs(prof.w[i]));
    if (std::abs(prof.w_r[i]) <= floor) continue;
    const int s = prof.w_r[i] > 0.0 ? 1 : -1;
    if (sign != 0 && s != sign) ++turns;
    sign = s;
  }
  return turns;
}

}  // namespace

std::string to_string(ShootOutcome outcome) {
  switch (outcome) {
    case ShootOutcome::converged_to_kappa_like_tail: return "converged-to-kappa-like-tail";
    case ShootOutcome::hit_zero: return "hit-zero";
    case ShootOutcome::blew_up: return "blew-up";
    case ShootOutcome::reached_rmax_bounded: return "reached-Rmax-bounded";
  }
  return "unknown";
}

double series_coefficient(double alpha, const ProblemParams& params) {
  return (alpha / (params.p - 1.0) - std::pow(alpha, params.p)) / (2.0 * params.n);
}

RadialProfile shoot(double alpha, const ProblemParams& params, const ShootOptions& options) {
  params.validate();
  if (!(alpha > 0.0)) throw DomainError("shooting parameter alpha must be positive");
  if (!(options.r_max > options.series_radius) || !(options.output_spacing > 0.0) ||
      !(options.series_radius > 0.0))
    throw UsageError("shoot: need 0 < series_radius < r_max and output_spacing > 0");

  const double p = params.p;
  const double n = params.n;
  const double k = kappa(p);
  // Length scale of the core, where w_rr ~ alpha^p. The stored mesh starts at
  // spacing h / 2^k below it and doubles every 64 points up to h.
  const double core = 0.02 / std::sqrt(1.0 + p * std::pow(alpha, p - 1.0));
  const std::vector<double> mesh = graded_mesh(options.output_spacing, core, options.r_max);
  const double v_cap = options.blowup_cap * std::max(1.0, k) / k;

  RadialProfile prof;
  prof.params = params;
  prof.alpha = alpha;

  auto record = [&](double r, const State& x) {
    prof.r.push_back(r);
    prof.w.push_back(alpha + k * x[0]);
    prof.w_r.push_back(k * x[1]);
  };

  // Regular series u = c r^2 + d r^4.
  const double v0 = alpha / k;
  const double c = -nonlinearity(v0, p) / (2.0 * n);
  const double d = c * (1.0 - nonlinearity_slope(v0, p)) / (4.0 * n + 8.0);
  auto series = [&](double r) {
    const double r2 = r * r;
    return State{c * r2 + d * r2 * r2, 2.0 * c * r + 4.0 * d * r2 * r};
  };

  const double r0 = std::min(options.series_radius, 0.1 * core);
  std::size_t j = 0;
  for (; j < mesh.size() && mesh[j] <= r0 * (1.0 + 1e-12); ++j) record(mesh[j], series(mesh[j]));

  auto stepper = odeint::make_dense_output(options.abs_tol / k, options.rel_tol, 0.02,
                                           odeint::runge_kutta_dopri5<State>());
  State x0 = series(r0);
  stepper.initialize(x0, r0, 0.1 * r0);
  const RadialSystem sys{n, p, v0};

  // Event functions, positive while the trajectory is admissible.
  auto e_zero = [&](const State& x) { return v0 + x[0]; };
  auto e_cap = [&](const State& x) { return v_cap - v0 - x[0]; };

  auto locate = [&](double a, double b, auto&& fn) {
    State x;
    for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, b); ++it) {
      const double m = 0.5 * (a + b);
      stepper.calc_state(m, x);
      (fn(x) > 0.0 ? a : b) = m;
    }
    return b;
  };

  double prev_r = r0;
  bool finished = false;
  while (!finished) {
    const auto [t0, t1] = stepper.do_step(sys);
    ++prof.accepted_steps;
    const double dt = stepper.current_time_step();
    if (!(dt > 1e-13 * std::max(1.0, t1)) || !std::isfinite(stepper.current_state()[0])) {
      prof.end_radius = t1;
      prof.outcome = ShootOutcome::blew_up;
      std::ostringstream os;
      os << "shoot: step size underflow at r=" << t1 << " (alpha=" << alpha << ")";
      throw ShootingError(os.str(), prof);
    }

    // Sample the mesh points of this step, then the step end itself.
    std::vector<double> probes;
    for (; j < mesh.size() && mesh[j] <= t1; ++j) probes.push_back(mesh[j]);
    const bool reaches_end = t1 >= options.r_max;
    if (!reaches_end) probes.push_back(t1);
    const std::size_t mesh_probes = reaches_end ? probes.size() : probes.size() - 1;

    for (std::size_t i = 0; i < probes.size(); ++i) {
      State x;
      stepper.calc_state(probes[i], x);
      const bool hit0 = e_zero(x) <= 0.0;
      const bool hitc = e_cap(x) <= 0.0;
      if (hit0 || hitc) {
        const double rz = hit0 ? locate(prev_r, probes[i], e_zero) : INFINITY;
        const double rc = hitc ? locate(prev_r, probes[i], e_cap) : INFINITY;
        const bool zero_first = rz <= rc;
        const double re = zero_first ? rz : rc;
        State xe;
        stepper.calc_state(re, xe);
        xe[0] = (zero_first ? 0.0 : v_cap) - v0;
        if (prof.r.empty() || re > prof.r.back()) record(re, xe);
        prof.outcome = zero_first ? ShootOutcome::hit_zero : ShootOutcome::blew_up;
        prof.end_radius = re;
        finished = true;
        break;
      }
      if (i < mesh_probes) record(probes[i], x);
      prev_r = probes[i];
    }
    if (!finished && reaches_end) {
      if (prof.r.back() < options.r_max * (1.0 - 1e-12)) {
        State x;
        stepper.calc_state(options.r_max, x);
        record(options.r_max, x);
      }
      prof.end_radius = options.r_max;
      const double w_end = prof.w.back();
      const double h_end = w_end / (p - 1.0) + 0.5 * prof.r.back() * prof.w_r.back();
      double wmax = 0.0;
      for (double v : prof.w) wmax = std::max(wmax, std::abs(v));
      const bool on_tail = std::abs(h_end) <= options.tail_tol * wmax && std::abs(w_end - k) > options.tail_tol * k;
      prof.outcome = on_tail ? ShootOutcome::converged_to_kappa_like_tail : ShootOutcome::reached_rmax_bounded;
      finished = true;
    }
    if (prof.accepted_steps > 50'000'000) throw NumericError("shoot: step budget exhausted");
  }

  prof.certified_radius = prof.end_radius;
  prof.turning_points = count_turning_points(prof, r0);
  prof.residual = profile_residual(prof);
  return prof;
}

double profile_residual(const RadialProfile& prof) {
  const double p = prof.params.p;
  const double n = prof.params.n;
  double worst = 0.0;
  for (const auto& [first, last] : uniform_runs(prof.r)) {
    const std::size_t m = last - first;
    if (m < 5) continue;
    const double h = prof.r[first + 1] - prof.r[first];
    const std::vector<double> wr(prof.w_r.begin() + first, prof.w_r.begin() + last);
    const std::vector<double> wv(prof.w.begin() + first, prof.w.begin() + last);
    const std::vector<double> w_rr = differentiate(wr, h, m);
    const std::vector<double> w_r_fd = differentiate(wv, h, m);
    for (std::size_t i = 0; i < m; ++i) {
      const double r = prof.r[first + i];
      const double w = wv[i];
      const double singular = r > 0.0 ? (n - 1.0) / r * wr[i] : (n - 1.0) * w_rr[i];
      const double drift = 0.5 * r * wr[i];
      const double linear = w / (p - 1.0);
      const double power = std::pow(std::abs(w), p - 1.0) * w;
      const double eq = w_rr[i] + singular - drift - linear + power;
      const double eq_scale = 1.0 + std::abs(w_rr[i]) + std::abs(singular) + std::abs(drift) + std::abs(linear) +
                              std::abs(power);
      // Differencing w cannot resolve below its rounding level |w| eps / h.
      const double round = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(w) / h;
      const double compat = std::max(0.0, std::abs(w_r_fd[i] - wr[i]) - round) / (1.0 + std::abs(wr[i]));
      worst = std::max({worst, std::abs(eq) / eq_scale, compat});
    }
  }
  return worst;
}

HPositivity profile_H_positivity(const RadialProfile& prof) {
  HPositivity out;
  out.min_H = INFINITY;
  const double p = prof.params.p;
  for (std::size_t i = 0; i < prof.r.size(); ++i)
    out.min_H = std::min(out.min_H, prof.w[i] / (p - 1.0) + 0.5 * prof.r[i] * prof.w_r[i]);
  out.positive = out.min_H > 0.0;
  return out;
}

bool bounded_positive_acceptance(const RadialProfile& prof, double r_max) {
  if (prof.r.empty() || prof.r.back() < r_max * (1.0 - 1e-12)) return false;
  if (prof.outcome == ShootOutcome::hit_zero || prof.outcome == ShootOutcome::blew_up) return false;
  const double bound = 10.0 * std::max(kappa(prof.params.p), prof.alpha);
  return std::all_of(prof.w.begin(), prof.w.end(), [&](double v) { return v > 0.0 && std::abs(v) <= bound; });
}

namespace {

ScanPoint classify(double alpha, const ProblemParams& params, const ShootOptions& options) {
  ScanPoint pt;
  pt.alpha = alpha;
  try {
    const RadialProfile prof = shoot(alpha, params, options);
    pt.outcome = prof.outcome;
    pt.turning_points = prof.turning_points;
    pt.end_radius = prof.end_radius;
  } catch (const ShootingError& e) {
    // Step-size collapse only happens at a singularity of the trajectory.
    pt.outcome = ShootOutcome::blew_up;
    pt.turning_points = e.partial().turning_points;
    pt.end_radius = e.partial().end_radius;
  }
  return pt;
}

bool same_class(const ScanPoint& a, ShootOutcome outcome, int turning) {
  return a.outcome == outcome && a.turning_points == turning;
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> jobs;
  for (unsigned t = 0; t < threads; ++t) {
    jobs.push_back(std::async(std::launch::async, [&, t] {
      for (std::size_t i = t; i < count; i += threads) fn(i);
    }));
  }
  for (auto& j : jobs) j.get();
}

}  // namespace

ScanResult scan_profiles(const ProblemParams& params, double alpha_lo, double alpha_hi, int count,
                         const ScanOptions& options) {
  params.validate();
  if (!(alpha_lo >= 0.0) || !(alpha_hi > alpha_lo)) throw DomainError("scan: need 0 <= alpha_lo < alpha_hi");
  if (count < 1) throw UsageError("scan: count must be >= 1");

  ScanResult res;
  res.params = params;
  res.points.resize(static_cast<std::size_t>(count));
  parallel_for(res.points.size(), options.threads, [&](std::size_t i) {
    const double alpha = alpha_lo + (alpha_hi - alpha_lo) * static_cast<double>(i + 1) / count;
    res.points[i] = classify(alpha, params, options.shoot);
  });

  for (std::size_t i = 0; i + 1 < res.points.size(); ++i) {
    const ScanPoint& a = res.points[i];
    const ScanPoint& b = res.points[i + 1];
    if (!same_class(a, b.outcome, b.turning_points)) {
      Bracket br;
      br.alpha_lo = a.alpha;
      br.alpha_hi = b.alpha;
      br.outcome_lo = a.outcome;
      br.outcome_hi = b.outcome;
      br.turning_lo = a.turning_points;
      br.turning_hi = b.turning_points;
      res.brackets.push_back(br);
    }
  }

  parallel_for(res.brackets.size(), options.threads, [&](std::size_t i) {
    Bracket& b = res.brackets[i];
    while (b.width() > options.bisect_tol && b.bisections < options.max_bisections) {
      const double mid = 0.5 * (b.alpha_lo + b.alpha_hi);
      if (mid <= b.alpha_lo || mid >= b.alpha_hi) break;
      const ScanPoint pm = classify(mid, params, options.shoot);
      if (same_class(pm, b.outcome_lo, b.turning_lo)) {
        b.alpha_lo = mid;
      } else {
        b.alpha_hi = mid;
        b.outcome_hi = pm.outcome;
        b.turning_hi = pm.turning_points;
      }
      ++b.bisections;
    }
  });

  const double k = kappa(params.p);
  for (Bracket& b : res.brackets) {
    const RadialProfile cand = bracket_candidate(b, params, options.shoot);
    double dev = 0.0;
    for (double v : cand.w) dev = std::max(dev, std::abs(v - k));
    b.certified_radius = cand.certified_radius;
    b.candidate_min_H = profile_H_positivity(cand).min_H;
    b.nonconstant = dev > options.shoot.tail_tol * k;
    b.accepted = b.nonconstant && bounded_positive_acceptance(cand, options.shoot.r_max);
    if (b.accepted) ++res.accepted_candidates;
  }
  return res;
}

RadialProfile bracket_candidate(const Bracket& bracket, const ProblemParams& params, const ShootOptions& options,
                                double sep_tol) {
  auto run = [&](double alpha) {
    try {
      return shoot(alpha, params, options);
    } catch (const ShootingError& e) {
      return e.partial();
    }
  };
  RadialProfile lo = run(bracket.alpha_lo);
  const RadialProfile hi = run(bracket.alpha_hi);
  const double tol = sep_tol * std::max(1.0, kappa(params.p));
  std::size_t keep = lo.r.size();
  for (std::size_t i = 0; i < lo.r.size(); ++i) {
    if (lo.r[i] > hi.r.back() || std::abs(lo.w[i] - hermite_sample(hi, lo.r[i]).first) > tol) {
      keep = i;
      break;
    }
  }
  keep = std::max<std::size_t>(keep, std::min<std::size_t>(5, lo.r.size()));
  const bool truncated = keep < lo.r.size();
  lo.r.resize(keep);
  lo.w.resize(keep);
  lo.w_r.resize(keep);
  lo.residual = profile_residual(lo);
  if (!truncated) return lo;

  const double p = params.p;
  lo.end_radius = lo.certified_radius = lo.r.back();
  lo.outcome = ShootOutcome::reached_rmax_bounded;
  double wmax = 0.0;
  for (double v : lo.w) wmax = std::max(wmax, std::abs(v));
  const double r_s = lo.r.back();
  const double w_s = lo.w.back();
  const double h_s = w_s / (p - 1.0) + 0.5 * r_s * lo.w_r.back();
  if (w_s > 0.0 && std::abs(h_s) <= options.tail_tol * wmax) {
    const double beta = 2.0 / (p - 1.0);
    const double h = r_s - lo.r[lo.r.size() - 2];
    for (std::size_t j = 1; r_s + static_cast<double>(j) * h <= options.r_max * (1.0 + 1e-12); ++j) {
      const double r = r_s + static_cast<double>(j) * h;
      const double w = w_s * std::pow(r_s / r, beta);
      lo.r.push_back(r);
      lo.w.push_back(w);
      lo.w_r.push_back(-beta * w / r);
    }
    lo.end_radius = lo.r.back();
    lo.outcome = ShootOutcome::converged_to_kappa_like_tail;
  }
  return lo;
}

GridFunction profile_on_grid(const RadialProfile& prof, const GridPtr& grid) {
  if (!grid || grid->kind() != GridKind::radial) throw UsageError("profile_on_grid needs a radial grid");
  if (grid->dim() != prof.params.n) throw UsageError("profile and grid dimensions differ");
  if (prof.r.size() < 2) throw UsageError("profile has too few mesh points");
  const double r_end = prof.r.back();
  const double p = prof.params.p;
  const double n = prof.params.n;
  const double beta = 2.0 / (p - 1.0);

  GridFunction f;
  f.grid = grid;
  const auto K = static_cast<Eigen::Index>(grid->size());
  f.values.resize(K);
  f.gradient = Eigen::MatrixXd(K, 1);
  f.laplacian = Eigen::VectorXd(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const double r = grid->point(static_cast<std::size_t>(k))[0];
    double w, wr, lap;
    if (r <= r_end) {
      std::tie(w, wr) = hermite_sample(prof, r);
      // The equation itself: Δw = r w_r / 2 + w/(p-1) - |w|^{p-1} w.
      lap = 0.5 * r * wr + w / (p - 1.0) - std::pow(std::abs(w), p - 1.0) * w;
    } else {
      w = prof.w.back() * std::pow(r_end / r, beta);
      wr = -beta * w / r;
      lap = w * beta * (beta + 2.0 - n) / (r * r);
    }
    f.values[k] = w;
    (*f.gradient)(k, 0) = wr;
    (*f.laplacian)[k] = lap;
  }
  return f;
}

}  // namespace sslab
