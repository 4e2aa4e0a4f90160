// One line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/fd_spectrum.hpp"
#include "oracles/rk4_shooter.hpp"
#include "sslab/app/config.hpp"
#include "sslab/app/random_fields.hpp"
#include "sslab/app/run.hpp"
#include "sslab/evolution.hpp"
#include "sslab/exponents.hpp"
#include "sslab/identities.hpp"
#include "sslab/physical.hpp"
#include "sslab/profiles.hpp"
#include "sslab/spectral.hpp"
#include "support/generators.hpp"

using namespace sslab;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Criterion = std::function<void(Verdict&)>;

void criterion_constants(Verdict& v) {
  testing::Gen gen(1001);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double p = gen.open_closed(1.0, 20.0);
    worst = std::max(worst, std::abs(std::pow(kappa(p), p - 1.0) * (p - 1.0) - 1.0));
  }
  v.require(worst < 1e-12, "kappa identity");
  const auto c = critical_exponents(11);
  v.require(c.lepin.value() == 7.0, "p_L(11) = 7");
  const double jl = 1.0 + 4.0 * (11.0 - 4.0 + 2.0 * std::sqrt(10.0)) / 9.0;
  v.require(std::abs(c.joseph_lundgren.value() - jl) < 1e-3, "p_JL(11) direct oracle");
  v.require(std::abs(c.joseph_lundgren.value() - 6.9220) < 1e-3, "p_JL(11) ~ 6.9220");
  v.detail << "max kappa residual " << worst << ", p_JL(11) " << c.joseph_lundgren.value();
}

void criterion_weighted_calculus(Verdict& v) {
  int moments = 0;
  for (int n = 1; n <= 3; ++n)
    for (const auto& c : gaussian_moment_checks(*QuadratureGrid::tensor(1, QuadratureGrid::default_degree(n)))) {
      v.require(c.holds, c.name);
      ++moments;
    }
  double worst = 0.0;
  int pairs = 0;
  for (const auto& c : app::randomized_identity_suite(2002, 200, 0, 0)) {
    if (c.name.rfind("random_ibp_", 0) != 0) continue;
    worst = std::max(worst, c.residual);
    ++pairs;
  }
  v.require(pairs == 200, "200 ibp pairs");
  v.require(worst < 1e-8, "ibp residual");
  v.detail << moments << " moment checks, " << pairs << " ibp pairs, max residual " << worst;
}

void criterion_spectrum(Verdict& v) {
  const auto basis = build_basis(1, 32);
  const double expect[4] = {-1.0, -0.5, 0.0, 0.5};
  double worst = 0.0, worst_fd = 0.0;
  for (double p : {2.0, 3.0, 5.0}) {
    const auto op = assemble(sample(basis.grid, AnalyticField::constant(kappa(p))), basis, ProblemParams{1, p});
    const auto s = spectrum(op, 4);
    const auto fd = oracle::fd_spectrum([p](double) { return kappa(p); }, p, 4);
    for (int k = 0; k < 4; ++k) {
      worst = std::max(worst, std::abs(s.eigenvalues[k] - expect[k]));
      worst_fd = std::max(worst_fd, std::abs(s.eigenvalues[k] - fd[k]));
    }
  }
  v.require(worst < 1e-6, "closed-form eigenvalues");
  v.require(worst_fd < 1e-3, "finite-difference oracle");
  v.detail << "max error " << worst << ", max gap to finite differences " << worst_fd;
}

void criterion_witnesses(Verdict& v) {
  const auto g = QuadratureGrid::tensor(1, 64);
  const auto one = sample(g, AnalyticField::constant(1.0));
  double worst_l = 0.0, worst_h = 0.0;
  testing::Gen gen(1004);
  std::vector<double> ps{2.0, 3.0, 5.0};
  for (int i = 0; i < 20; ++i) ps.push_back(gen.uniform(1.05, 12.0));
  for (double p : ps) {
    const auto w = sample(g, AnalyticField::constant(kappa(p)));
    // L_kappa 1 = -lambda 1 with lambda = -1.
    const auto l = linearized_apply(w, one, ProblemParams{1, p});
    worst_l = std::max(worst_l, (l.values.array() - 1.0).abs().maxCoeff());
    const auto h = compute_H(w, p);
    worst_h = std::max(worst_h, std::max(std::abs(h.min - kappa(p) / (p - 1.0)), std::abs(h.max - kappa(p) / (p - 1.0))));
    v.require(h.positive(), "H(kappa) > 0");
  }
  v.require(worst_l < 1e-10, "eigenvalue -1 of the constant");
  v.require(worst_h < 1e-10, "H(kappa) = kappa/(p-1)");
  v.detail << ps.size() << " exponents, eigen residual " << worst_l << ", H residual " << worst_h;
}

struct EvolutionRun {
  std::string label;
  EvolutionState state;
};

// Rescaled runs shared by the sign-change and energy criteria.
std::vector<EvolutionRun>& evolution_runs() {
  static std::vector<EvolutionRun> runs = [] {
    std::vector<EvolutionRun> out;
    auto add = [&](std::string label, double p, std::function<double(double)> w0, double s_end) {
      auto st = make_rescaled_state(ProblemParams{1, p}, 8.0, 1600, std::move(w0), 10);
      st.cap = 10.0 * std::max(kappa(p), 1.0 + kappa(p));
      evolve_rescaled(st, 1e-3, s_end);
      out.push_back({std::move(label), std::move(st)});
    };
    auto bump = [](double k, double a) {
      return [=](double y) { return std::abs(y) < 2.0 ? k + a * std::exp(1.0 - 1.0 / (1.0 - y * y / 4.0)) : k; };
    };
    add("kappa+0.1 bump, p=2", 2.0, bump(1.0, 0.1), 5.0);
    add("kappa-0.1 bump, p=2", 2.0, bump(1.0, -0.1), 5.0);
    add("kappa-0.1 bump, p=3", 3.0, bump(kappa(3.0), -0.1), 5.0);
    add("gaussian 0.5, p=2", 2.0, [](double y) { return 0.5 * std::exp(-y * y / 4.0); }, 5.0);
    add("kappa, p=5", 5.0, [](double) { return kappa(5.0); }, 2.0);
    return out;
  }();
  return runs;
}

void criterion_sign_change(Verdict& v) {
  int profiles = 0, changes = 0;
  auto check = [&](const GridFunction& w, const ProblemParams& P, int N, const std::string& label) {
    const auto c = theorem58_check(w, P, N, 1e-4);
    ++profiles;
    changes += c.h_changes_sign ? 1 : 0;
    v.require(c.consistent, label);
  };

  for (double p : {1.5, 2.0, 3.0, 5.0, 7.0}) {
    const auto g1 = QuadratureGrid::tensor(1, 64);
    check(sample(g1, AnalyticField::constant(kappa(p))), ProblemParams{1, p}, 32, "kappa n=1");
    check(sample(g1, AnalyticField::constant(0.0)), ProblemParams{1, p}, 32, "zero n=1");
    for (int n : {3, 11}) {
      const auto gr = QuadratureGrid::radial(n, 64);
      check(sample(gr, AnalyticField::constant(kappa(p))), ProblemParams{n, p}, 32, "kappa radial");
    }
  }

  struct Scan {
    int n;
    double p, lo, hi;
    int count;
  };
  int brackets = 0;
  for (const auto& s : {Scan{11, 5.0, 0.0, 30.0, 120}, Scan{3, 3.0, 0.0, 3.0 * kappa(3.0), 64},
                        Scan{11, 5.0, 0.0, 3.0 * kappa(5.0), 64}}) {
    const ProblemParams P{s.n, s.p};
    const auto res = scan_profiles(P, s.lo, s.hi, s.count);
    const auto grid = QuadratureGrid::radial(s.n, 64);
    for (const auto& b : res.brackets) {
      const auto cand = bracket_candidate(b, P);
      check(profile_on_grid(cand, grid), P, 32, "scan candidate");
      ++brackets;
    }
  }

  const auto g1 = QuadratureGrid::tensor(1, 64);
  for (const auto& run : evolution_runs()) check(state_on_grid(run.state, g1), run.state.params, 32, run.label);

  v.detail << profiles << " profiles (" << brackets << " scan candidates, " << evolution_runs().size()
           << " evolution limits), " << changes << " with sign-changing H";
}

void criterion_inequalities(Verdict& v) {
  int log_tests = 0, integrability = 0, poincare = 0, battery = 0;
  for (const auto& c : standard_identity_battery()) {
    v.require(c.holds, c.name);
    ++battery;
  }
  for (const auto& c : app::randomized_identity_suite(2006, 0, 50, 100)) {
    v.require(c.holds, c.name);
    if (c.name.rfind("random_log_test_", 0) == 0) ++log_tests;
    if (c.name.rfind("random_integrability_", 0) == 0) ++integrability;
    if (c.name.rfind("random_poincare_", 0) == 0) ++poincare;
  }
  v.require(log_tests == 50 && integrability == 50, "50 randomized cases");
  v.require(poincare == 100, "100 random bumps");
  v.detail << battery << " battery checks, " << log_tests << " log-test, " << integrability << " integrability, "
           << poincare << " Poincare cases";
}

void criterion_shooting(Verdict& v) {
  testing::Gen gen(1007);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double p = gen.uniform(1.1, 10.0);
    const int n = gen.integer(1, 12);
    worst = std::max(worst, shoot(kappa(p), ProblemParams{n, p}).residual);
  }
  v.require(worst < 1e-10, "kappa residual");

  double gap = 0.0;
  for (auto [alpha, n, p] : {std::tuple{2.0, 3, 2.0}, std::tuple{0.8, 1, 3.0}, std::tuple{1.2, 2, 2.5}}) {
    const auto prof = shoot(alpha, ProblemParams{n, p});
    const double r_end = std::min(prof.end_radius, 10.0);
    const auto ref = oracle::rk4_shoot(alpha, n, p, r_end, 1e-4);
    const double limit = std::min(r_end, ref.r.back()) - 0.05;
    for (std::size_t i = 0; i < prof.r.size() && prof.r[i] <= limit; ++i)
      if (prof.r[i] >= ref.r.front()) gap = std::max(gap, std::abs(prof.w[i] - ref.value(prof.r[i])));
  }
  v.require(gap < 1e-6, "fixed-step oracle");

  double series = 0.0;
  for (auto [alpha, n, p] : {std::tuple{2.0, 3, 2.0}, std::tuple{0.5, 1, 3.0}, std::tuple{1.2, 11, 5.0}}) {
    const ProblemParams P{n, p};
    const auto prof = shoot(alpha, P);
    double s44 = 0, s46 = 0, s66 = 0, b2 = 0, b4 = 0;
    for (std::size_t i = 1; i < prof.r.size() && prof.r[i] <= 0.05; ++i) {
      const double r2 = prof.r[i] * prof.r[i];
      const double d = prof.w[i] - alpha;
      s44 += r2 * r2;
      s46 += r2 * r2 * r2;
      s66 += r2 * r2 * r2 * r2;
      b2 += d * r2;
      b4 += d * r2 * r2;
    }
    const double c = (b2 * s66 - b4 * s46) / (s44 * s66 - s46 * s46);
    series = std::max(series, std::abs(c - (alpha / (p - 1.0) - std::pow(alpha, p)) / (2.0 * n)));
  }
  v.require(series < 1e-4, "series coefficient");
  v.detail << "kappa residual " << worst << ", oracle gap " << gap << ", series error " << series;
}

void criterion_blowup_oracle(Verdict& v) {
  BlowupOptions o;
  o.diffusion = false;
  const auto run = solve_physical([](double) { return 1.0; }, PhysicalDomain{1, 2.0, 40}, ProblemParams{1, 2.0}, o);
  v.require(run.blew_up && run.fit.has_value(), "blow-up with a fit");
  if (!run.fit) return;
  const double eT = std::abs(run.fit->T - 1.0);
  const double eb = std::abs(run.fit->exponent - 1.0);
  v.require(eT < 1e-4, "fitted T");
  v.require(eb < 1e-3, "fitted exponent");
  v.detail << "T error " << eT << ", exponent error " << eb;
}

void criterion_convergence(Verdict& v) {
  BlowupOptions o;
  o.dt_factor = 0.05;
  const auto run = solve_physical([](double x) { return 3.0 * std::cos(std::numbers::pi * x / 4.0); },
                                  PhysicalDomain{1, 2.0, 4000}, ProblemParams{1, 2.0}, o);
  v.require(run.blew_up, "blow-up");
  if (!run.blew_up) return;
  const auto rep = theorem13_pipeline(run);
  v.require(rep.decreasing_tail >= 3, "three decreasing snapshots");
  v.require(!rep.points.empty() && rep.points.back().sup_dev < 0.05, "final deviation below 0.05");
  v.require(rep.converged, "converged");
  v.detail << "T " << rep.T << ", decreasing tail " << rep.decreasing_tail << ", final deviation "
           << (rep.points.empty() ? NAN : rep.points.back().sup_dev);
}

void criterion_energy(Verdict& v) {
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const auto g = QuadratureGrid::tensor(n, QuadratureGrid::default_degree(n));
    for (double p : {1.5, 2.0, 3.0, 5.0}) {
      const ProblemParams P{n, p};
      worst = std::max(worst, std::abs(energy(sample(g, AnalyticField::constant(0.0)), P).E));
      const double ek = (0.5 - 1.0 / (p + 1.0)) * std::pow(kappa(p), p + 1.0);
      worst = std::max(worst, std::abs(energy(sample(g, AnalyticField::constant(kappa(p))), P).E - ek));
    }
  }
  v.require(worst < 1e-10, "closed-form energies");

  int runs = 0;
  for (const auto& run : evolution_runs()) {
    const auto& h = run.state.energy_history;
    bool mono = true;
    for (std::size_t j = 1; j < h.size(); ++j) mono = mono && h[j].second <= h[j - 1].second + 1e-8 * (1.0 + std::abs(h[j - 1].second));
    v.require(mono, "monotone energy: " + run.label);
    ++runs;
  }

  const auto& perturbed = evolution_runs().front().state;
  const auto d = dissipation_check(perturbed, 0.0, perturbed.snapshots.back().s);
  v.require(d.rel_err < 0.02, "dissipation identity");
  v.detail << "energy residual " << worst << ", " << runs << " monotone runs, dissipation rel. error " << d.rel_err
           << " over [0, " << perturbed.snapshots.back().s << "]";
}

void criterion_determinism(Verdict& v, const fs::path& root) {
  const std::vector<std::string> configs = {
      "kind = exponents\nn = 11\np = 5\n",
      "kind = verify-identities\nrandom_cases = 40\n",
      "kind = spectrum\np = 3\n",
      "kind = shoot\nn = 3\np = 3\nalpha = 1.2\n",
      "kind = scan\nn = 11\np = 5\ncount = 32\n",
      "kind = evolve-rescaled\ny_cells = 400\ns_end = 2\n",
      "kind = blowup\nx_cells = 1000\n",
      "kind = theorem13\n",
  };
  int agreed = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto config = app::parse_config(configs[i]);
    app::RunOptions o;
    o.out_dir = root / app::to_string(config.kind());
    o.quiet = true;
    fs::remove_all(o.out_dir);
    const auto out = app::run(config, o);
    const auto rep = app::replay(out.manifest_path);
    v.require(out.exit_code == app::exit_pass, "run " + app::to_string(config.kind()));
    v.require(rep.agrees, "replay " + app::to_string(config.kind()));
    agreed += rep.agrees ? 1 : 0;
  }
  v.detail << agreed << "/" << configs.size() << " manifests replayed";
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_runs");
  fs::create_directories(root);

  const std::vector<std::pair<int, Criterion>> criteria = {
      {1, criterion_constants},
      {2, criterion_weighted_calculus},
      {3, criterion_spectrum},
      {4, criterion_witnesses},
      {5, criterion_sign_change},
      {6, criterion_inequalities},
      {7, criterion_shooting},
      {8, criterion_blowup_oracle},
      {9, criterion_convergence},
      {10, criterion_energy},
      {11, [&](Verdict& v) { criterion_determinism(v, root); }},
  };

  int failed = 0;
  for (const auto& [id, body] : criteria) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << id << ": " << (v.pass ? "PASS" : "FAIL") << " (" << v.detail.str() << "; "
              << secs << " s)" << std::endl;
    failed += v.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
