#include "sslab/app/random_fields.hpp"

#include <cmath>
#include <fmt/format.h>

#include "sslab/errors.hpp"
#include "sslab/exponents.hpp"

namespace sslab::app {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

GridFunction values_only(const GridPtr& grid, Eigen::VectorXd values) {
  GridFunction f;
  f.grid = grid;
  f.values = std::move(values);
  return f;
}

}  // namespace

AnalyticField Polynomial::field() const {
  AnalyticField f;
  const auto terms_copy = terms;
  f.value = [terms_copy](std::span<const double> y) {
    double s = 0.0;
    for (const auto& [a, c] : terms_copy) {
      double t = c;
      for (std::size_t d = 0; d < y.size(); ++d) t *= ipow(y[d], a[d]);
      s += t;
    }
    return s;
  };
  f.gradient = [terms_copy](std::span<const double> y, std::span<double> g) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      double s = 0.0;
      for (const auto& [a, c] : terms_copy) {
        if (a[i] == 0) continue;
        double t = c * a[i];
        for (std::size_t d = 0; d < y.size(); ++d) t *= ipow(y[d], d == i ? a[d] - 1 : a[d]);
        s += t;
      }
      g[i] = s;
    }
  };
  f.laplacian = [terms_copy](std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      for (const auto& [a, c] : terms_copy) {
        if (a[i] < 2) continue;
        double t = c * a[i] * (a[i] - 1);
        for (std::size_t d = 0; d < y.size(); ++d) t *= ipow(y[d], d == i ? a[d] - 2 : a[d]);
        s += t;
      }
    }
    return s;
  };
  return f;
}

Polynomial Polynomial::random(int dim, int degree, std::mt19937_64& rng) {
  if (dim < 1 || dim > 2) throw UsageError("random polynomials are defined for n = 1, 2");
  Polynomial poly;
  poly.dim = dim;
  for (int i = 0; i <= degree; ++i) {
    if (dim == 1) {
      poly.terms.push_back({{i}, uniform(rng, -1.0, 1.0)});
      continue;
    }
    for (int j = 0; i + j <= degree; ++j) poly.terms.push_back({{i, j}, uniform(rng, -1.0, 1.0)});
  }
  return poly;
}

EigenTriple random_eigen_triple(const GridPtr& grid, std::mt19937_64& rng) {
  const int n = grid->dim();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double p = uniform(rng, 1.2, 5.0);
    const double c = uniform(rng, -0.4, 0.4);
    const double sigma = uniform(rng, 0.8, 2.0);
    const double level = uniform(rng, 0.3, 1.2);
    std::vector<double> y0(static_cast<std::size_t>(n));
    for (auto& v : y0) v = uniform(rng, -1.0, 1.0);

    // g = c exp(-|y-y0|^2/sigma^2); Q = 𝓛f/f = Δg + |grad g|^2 - y.grad g/2.
    const double a = 2.0 * c / (sigma * sigma);
    const double s2 = sigma * sigma;
    struct Local {
      double g, lap_g, q;
      std::vector<double> grad_g, grad_q;
    };
    auto local = [=](std::span<const double> y) {
      Local L;
      std::vector<double> d(y.size());
      double d2 = 0.0;
      double yd = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        d[i] = y[i] - y0[i];
        d2 += d[i] * d[i];
        yd += y[i] * d[i];
      }
      const double e = std::exp(-d2 / s2);
      L.g = c * e;
      L.lap_g = a * e * (2.0 * d2 / s2 - n);
      L.grad_g.resize(y.size());
      L.grad_q.resize(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) L.grad_g[i] = -a * e * d[i];
      L.q = L.lap_g + a * a * e * e * d2 + 0.5 * a * e * yd;
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double de = -2.0 / s2 * e * d[i];
        const double t1 = a * (de * (2.0 * d2 / s2 - n) + e * 4.0 * d[i] / s2);
        const double t2 = a * a * (2.0 * e * de * d2 + e * e * 2.0 * d[i]);
        const double t3 = 0.5 * a * (de * yd + e * (d[i] + y[i]));
        L.grad_q[i] = t1 + t2 + t3;
      }
      return L;
    };

    // p w^{p-1} = V = level p/(p-1) - Q, so that L_w f = -mu f with mu = (1 - level p)/(p-1).
    const double base = level * p / (p - 1.0);
    const double mu = (1.0 - level * p) / (p - 1.0);

    const auto count = static_cast<Eigen::Index>(grid->size());
    Eigen::VectorXd wv(count), fv(count), fl(count);
    Eigen::MatrixXd wg(count, n), fg(count, n);
    bool ok = true;
    for (Eigen::Index k = 0; k < count && ok; ++k) {
      const auto y = grid->point(static_cast<std::size_t>(k));
      const Local L = local(y);
      const double V = base - L.q;
      if (!(V > 0.05 * base)) {
        ok = false;
        break;
      }
      wv[k] = std::pow(V / p, 1.0 / (p - 1.0));
      fv[k] = std::exp(L.g);
      double grad_sq = 0.0;
      for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        wg(k, i) = -wv[k] * L.grad_q[ui] / ((p - 1.0) * V);
        fg(k, i) = fv[k] * L.grad_g[ui];
        grad_sq += L.grad_g[ui] * L.grad_g[ui];
      }
      fl[k] = fv[k] * (L.lap_g + grad_sq);
    }
    if (!ok) continue;

    EigenTriple t;
    t.p = p;
    t.mu = mu;
    t.w = values_only(grid, wv);
    t.w.gradient = wg;
    t.f = values_only(grid, fv);
    t.f.gradient = fg;
    t.f.laplacian = fl;
    if (!compute_H(t.w, p).positive()) continue;
    t.description = fmt::format("n={} p={:.6g} c={:.6g} sigma={:.6g} level={:.6g} mu={:.6g}", n, p, c, sigma, level, mu);
    return t;
  }
  throw NumericError("random_eigen_triple: no admissible draw in 1000 attempts");
}

AnalyticField random_test_function(int dim, std::mt19937_64& rng) {
  const double a = uniform(rng, -1.0, 1.0);
  const double c = uniform(rng, -1.0, 1.0);
  std::vector<double> b(static_cast<std::size_t>(dim));
  for (auto& v : b) v = uniform(rng, -1.0, 1.0);
  AnalyticField f;
  f.value = [=](std::span<const double> y) { return a + dot(b, y) + c * dot(y, y); };
  f.gradient = [=](std::span<const double> y, std::span<double> g) {
    for (std::size_t i = 0; i < y.size(); ++i) g[i] = b[i] + 2.0 * c * y[i];
  };
  f.laplacian = [=](std::span<const double>) { return 2.0 * c * dim; };
  return f;
}

AnalyticField random_bump(int dim, std::mt19937_64& rng) {
  const double radius = uniform(rng, 0.5, 3.0);
  const double a = uniform(rng, -2.0, 2.0);
  std::vector<double> b(static_cast<std::size_t>(dim)), y0(static_cast<std::size_t>(dim));
  for (auto& v : b) v = uniform(rng, -1.0, 1.0);
  for (auto& v : y0) v = uniform(rng, -2.0, 2.0);
  const AnalyticField eta = radial_cutoff(dim, radius);

  auto shifted = [y0](std::span<const double> y) {
    std::vector<double> s(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) s[i] = y[i] - y0[i];
    return s;
  };
  AnalyticField f;
  f.value = [=](std::span<const double> y) { return (a + dot(b, y)) * eta.value(shifted(y)); };
  f.gradient = [=](std::span<const double> y, std::span<double> g) {
    const auto s = shifted(y);
    std::vector<double> ge(y.size());
    eta.gradient(s, ge);
    const double e = eta.value(s);
    const double q = a + dot(b, y);
    for (std::size_t i = 0; i < y.size(); ++i) g[i] = q * ge[i] + e * b[i];
  };
  f.laplacian = [=](std::span<const double> y) {
    const auto s = shifted(y);
    std::vector<double> ge(y.size());
    eta.gradient(s, ge);
    return (a + dot(b, y)) * eta.laplacian(s) + 2.0 * dot(b, ge);
  };
  return f;
}

double random_admissible_m(double p, std::mt19937_64& rng) {
  const int choice = static_cast<int>(std::uniform_int_distribution<int>(0, 2)(rng));
  if (choice == 0) return p;
  if (choice == 1 && half_exponent_admissible(p)) return 0.5 * (p - 1.0);
  // m^2 - 2pm + p < 0 between the roots p -+ sqrt(p^2 - p); also m > 1/2.
  const double root = std::sqrt(p * p - p);
  const double lo = std::max(0.5, p - root);
  const double hi = p + root;
  const double margin = 0.05 * (hi - lo);
  return uniform(rng, lo + margin, hi - margin);
}

std::vector<IdentityCheck> randomized_identity_suite(std::uint64_t seed, int ibp_pairs, int inequality_cases,
                                                     int poincare_cases) {
  std::mt19937_64 rng(seed);
  const GridPtr grids[2] = {QuadratureGrid::tensor(1, QuadratureGrid::default_degree(1)),
                            QuadratureGrid::tensor(2, QuadratureGrid::default_degree(2))};
  std::vector<IdentityCheck> out;

  for (int i = 0; i < ibp_pairs; ++i) {
    const int dim = 1 + i % 2;
    const int df = std::uniform_int_distribution<int>(0, 6)(rng);
    const int dg = std::uniform_int_distribution<int>(0, 6)(rng);
    const auto f = sample(grids[dim - 1], Polynomial::random(dim, df, rng).field());
    const auto g = sample(grids[dim - 1], Polynomial::random(dim, dg, rng).field());
    IdentityCheck c = verify_ibp(f, g, 1e-8);
    c.name = fmt::format("random_ibp_{}", i);
    c.note = fmt::format("n={} deg_f={} deg_g={}", dim, df, dg);
    out.push_back(std::move(c));
  }

  for (int i = 0; i < inequality_cases; ++i) {
    const int dim = 1 + i % 2;
    const GridPtr& grid = grids[dim - 1];
    const EigenTriple t = random_eigen_triple(grid, rng);
    const auto phi = sample(grid, random_test_function(dim, rng));
    IdentityCheck log_test = verify_log_test_inequality(t.w, t.f, t.mu, phi, t.p);
    log_test.name = fmt::format("random_log_test_{}", i);
    log_test.note = t.description + " " + log_test.note;
    out.push_back(std::move(log_test));

    const double m = random_admissible_m(t.p, rng);
    const double radius = uniform(rng, 1.0, 4.0);
    const auto eta = sample(grid, radial_cutoff(dim, radius));
    IdentityCheck prop = verify_prop35_inequality(t.w, m, eta, t.p);
    prop.name = fmt::format("random_integrability_{}", i);
    prop.note = fmt::format("{} R={:.6g} {}", t.description, radius, prop.note);
    out.push_back(std::move(prop));
  }

  for (int i = 0; i < poincare_cases; ++i) {
    const int dim = 1 + i % 2;
    IdentityCheck c = verify_poincare(sample(grids[dim - 1], random_bump(dim, rng)));
    c.name = fmt::format("random_poincare_{}", i);
    c.note = fmt::format("n={}", dim);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace sslab::app
