#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "sslab/app/output.hpp"
#include "sslab/app/random_fields.hpp"
#include "sslab/app/run.hpp"
#include "sslab/errors.hpp"
#include "sslab/evolution.hpp"
#include "sslab/exponents.hpp"
#include "sslab/identities.hpp"
#include "sslab/physical.hpp"
#include "sslab/profiles.hpp"
#include "sslab/spectral.hpp"

namespace sslab::app {

namespace {

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json extended(const ExtendedReal& x) { return x.is_infinite() ? Json("+inf") : Json(x.value()); }

Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

ProblemParams params_of(const RunConfig& c) {
  ProblemParams p{static_cast<int>(c.integer("n")), c.real("p")};
  p.validate();
  return p;
}

Json params_json(const ProblemParams& p) { return Json{{"n", p.n}, {"p", p.p}, {"kappa", kappa(p.p)}}; }

ShootOptions shoot_options(const RunConfig& c) {
  ShootOptions o;
  o.r_max = c.real("r_max");
  o.rel_tol = c.real("rel_tol");
  o.abs_tol = c.real("abs_tol");
  o.blowup_cap = c.real("blowup_cap");
  o.series_radius = c.real("series_radius");
  o.output_spacing = c.real("output_spacing");
  o.tail_tol = c.real("tail_tol");
  return o;
}

std::string csv_bool(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------- exponents

ExperimentResult run_exponents(const RunConfig& c) {
  const ProblemParams P = params_of(c);
  const CriticalExponents ce = critical_exponents(P.n);
  const double k = kappa(P.p);
  const double identity = std::pow(k, P.p - 1.0) * (P.p - 1.0) - 1.0;
  const bool ordered = P.n < 11 || (ce.sobolev < ce.joseph_lundgren && ce.joseph_lundgren < ce.lepin);

  Json j;
  j["params"] = params_json(P);
  j["p_S"] = extended(ce.sobolev);
  j["p_JL"] = extended(ce.joseph_lundgren);
  j["p_L"] = extended(ce.lepin);
  j["kappa"] = k;
  j["kappa_identity_residual"] = identity;
  j["m_condition"] = Json{{"m_equals_p", m_condition(P.p, P.p)},
                          {"m_half", half_exponent_admissible(P.p)},
                          {"half_threshold", half_exponent_threshold()}};
  const auto regime = [&] {
    if (P.p < ce.sobolev) return "subcritical";
    if (P.p < ce.joseph_lundgren) return "between Sobolev and Joseph-Lundgren";
    if (P.p < ce.lepin) return "between Joseph-Lundgren and Lepin";
    return "at or above Lepin";
  }();
  j["regime"] = regime;

  ExperimentResult r;
  r.files.push_back({"exponents.json", dump(j)});
  r.verdicts["kappa_identity"] = std::abs(identity) < 1e-12;
  r.verdicts["exponent_ordering"] = ordered;
  r.verdicts["m_equals_p_admissible"] = m_condition(P.p, P.p);
  r.summary = fmt::format("n={} p={} kappa={:.17g} p_S={} p_JL={} p_L={}", P.n, P.p, k, ce.sobolev.to_string(),
                          ce.joseph_lundgren.to_string(), ce.lepin.to_string());
  return r;
}

// ------------------------------------------------------- verify-identities

ExperimentResult run_verify_identities(const RunConfig& c) {
  const int cases = static_cast<int>(c.integer("random_cases"));
  const int degree_1d = c.integer("n") == 1 ? static_cast<int>(c.integer("degree")) : QuadratureGrid::default_degree(1);

  std::vector<IdentityCheck> checks = gaussian_moment_checks(*QuadratureGrid::tensor(1, degree_1d));
  for (auto& chk : standard_identity_battery()) checks.push_back(std::move(chk));
  for (auto& chk : randomized_identity_suite(static_cast<std::uint64_t>(c.integer("seed")), cases,
                                             std::max(1, cases / 4), std::max(1, cases / 2)))
    checks.push_back(std::move(chk));

  CsvTable table({"check_name", "lhs", "rhs", "residual", "holds"});
  int failed = 0;
  double worst = 0.0;
  for (const auto& chk : checks) {
    table.row({chk.name, csv_number(chk.lhs), csv_number(chk.rhs), csv_number(chk.residual), csv_bool(chk.holds)});
    if (!chk.holds) ++failed;
    worst = std::max(worst, chk.residual);
  }
  Json j;
  j["checks"] = checks.size();
  j["failed"] = failed;
  j["max_residual"] = worst;
  j["failures"] = Json::array();
  for (const auto& chk : checks)
    if (!chk.holds) j["failures"].push_back(Json{{"name", chk.name}, {"lhs", chk.lhs}, {"rhs", chk.rhs}, {"note", chk.note}});

  ExperimentResult r;
  r.files.push_back({"identities.csv", table.str()});
  r.files.push_back({"identities.json", dump(j)});
  r.verdicts["all_hold"] = failed == 0;
  r.summary = fmt::format("{} checks, {} failed", checks.size(), failed);
  return r;
}

// ------------------------------------------------------------------ spectrum

ExperimentResult run_spectrum(const RunConfig& c) {
  const ProblemParams P = params_of(c);
  const bool radial = c.text("basis_kind") == "radial";
  const int N = static_cast<int>(c.integer("basis"));
  const int degree = static_cast<int>(c.integer("degree"));
  const std::string profile = c.text("profile");

  GridPtr grid;
  if (radial) {
    grid = QuadratureGrid::radial(P.n, std::max({degree, 64, N}));
  } else {
    const int m = static_cast<int>(std::llround(std::pow(static_cast<double>(N), 1.0 / P.n)));
    grid = QuadratureGrid::tensor(P.n, std::max(degree, m));
  }

  GridFunction w;
  Json profile_info{{"profile", profile}};
  if (profile == "kappa") {
    w = sample(grid, AnalyticField::constant(kappa(P.p)));
  } else if (profile == "zero") {
    w = sample(grid, AnalyticField::constant(0.0));
  } else {
    if (!radial) throw UsageError("config key 'profile': shoot profiles need basis_kind = radial");
    const RadialProfile prof = shoot(c.real("alpha"), P, shoot_options(c));
    w = profile_on_grid(prof, grid);
    profile_info["alpha"] = prof.alpha;
    profile_info["outcome"] = to_string(prof.outcome);
    profile_info["residual"] = prof.residual;
    profile_info["end_radius"] = prof.end_radius;
  }

  const WeightedBasis basis = radial ? build_radial_basis(P.n, N, grid) : build_basis(P.n, N, grid);
  const SpectralOperator op = assemble(w, basis, P);
  const int k = static_cast<int>(c.integer("eigen_count"));
  const SpectrumReport rep = spectrum(op, k);
  const double rayleigh = first_eigenvalue_rayleigh(op);
  const SignChangeCheck t58 = theorem58_check(w, P, N, c.real("theorem58_tol"));
  const StabilityReport stab = stability_classify(w, P, N, c.real("span_tol"));

  Json j;
  j["params"] = params_json(P);
  j["N"] = N;
  j["basis_kind"] = radial ? "radial" : "tensor";
  j["quadrature_degree"] = grid->degree();
  j["profile"] = profile_info;
  j["eigenvalues"] = rep.eigenvalues;
  j["lambda1_rayleigh"] = rayleigh;
  j["symmetry_residual"] = op.symmetry_residual();
  j["stability_verdict"] = stab.linearly_stable ? "linearly-stable" : "unstable";
  j["witnesses"] = Json::array();
  for (const auto& m : stab.unstable_modes)
    j["witnesses"].push_back(
        Json{{"eigenvalue", m.eigenvalue}, {"projection_residual", m.projection_residual}, {"kind", to_string(m.kind)}});
  j["stability_note"] = stab.note;
  j["sign_change_check"] = Json{{"H_changes_sign", t58.h_changes_sign}, {"H_min", t58.h_min}, {"H_max", t58.h_max},
                                {"lambda1", t58.lambda1}, {"consistent", t58.consistent}};

  CsvTable table({"index", "eigenvalue"});
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) table.row({std::to_string(i + 1), csv_number(rep.eigenvalues[i])});

  ExperimentResult r;
  r.files.push_back({"spectrum.json", dump(j)});
  r.files.push_back({"eigenvalues.csv", table.str()});
  const double l1 = rep.eigenvalues.front();
  r.verdicts["symmetric"] = op.symmetry_residual() < 1e-10;
  r.verdicts["rayleigh_agrees"] = std::abs(rayleigh - l1) <= 1e-8 * std::max(1.0, std::abs(l1));
  r.verdicts["sign_change_consistent"] = t58.consistent;
  r.summary = fmt::format("lambda_1={:.12g} ({}), stability: {}", l1, profile,
                          stab.linearly_stable ? "linearly-stable" : "unstable");
  return r;
}

// --------------------------------------------------------------------- shoot

ExperimentResult run_shoot(const RunConfig& c) {
  const ProblemParams P = params_of(c);
  const RadialProfile prof = shoot(c.real("alpha"), P, shoot_options(c));
  const HPositivity hp = profile_H_positivity(prof);

  CsvTable table({"r", "w", "w_r", "H"});
  const double inv = 1.0 / (P.p - 1.0);
  for (std::size_t i = 0; i < prof.r.size(); ++i)
    table.row({csv_number(prof.r[i]), csv_number(prof.w[i]), csv_number(prof.w_r[i]),
               csv_number(inv * prof.w[i] + 0.5 * prof.r[i] * prof.w_r[i])});

  Json j;
  j["params"] = params_json(P);
  j["alpha"] = prof.alpha;
  j["outcome"] = to_string(prof.outcome);
  j["end_radius"] = prof.end_radius;
  j["residual"] = prof.residual;
  j["min_H"] = hp.min_H;
  j["H_positive"] = hp.positive;
  j["turning_points"] = prof.turning_points;
  j["accepted_steps"] = prof.accepted_steps;
  j["series_coefficient"] = series_coefficient(prof.alpha, P);
  j["mesh_points"] = prof.r.size();

  ExperimentResult r;
  r.files.push_back({"profile.csv", table.str()});
  r.files.push_back({"shoot.json", dump(j)});
  r.verdicts["residual_below_tol"] = prof.residual < c.real("residual_tol");
  r.verdicts["regular_at_origin"] = !prof.w_r.empty() && prof.w_r.front() == 0.0;
  r.summary = fmt::format("alpha={:.12g}: {} at r={:.6g}, residual {:.3g}", prof.alpha, to_string(prof.outcome),
                          prof.end_radius, prof.residual);
  return r;
}

// ---------------------------------------------------------------------- scan

ExperimentResult run_scan(const RunConfig& c) {
  const ProblemParams P = params_of(c);
  ScanOptions so;
  so.shoot = shoot_options(c);
  so.bisect_tol = c.real("bisect_tol");
  so.max_bisections = static_cast<int>(c.integer("max_bisections"));
  so.threads = static_cast<unsigned>(c.integer("threads"));
  const ScanResult res = scan_profiles(P, c.real("alpha_lo"), c.real("alpha_hi"), static_cast<int>(c.integer("count")), so);

  CsvTable table({"alpha", "outcome", "turning_points", "end_radius"});
  for (const auto& pt : res.points)
    table.row({csv_number(pt.alpha), to_string(pt.outcome), std::to_string(pt.turning_points), csv_number(pt.end_radius)});

  const GridPtr grid = QuadratureGrid::radial(P.n, 64);
  bool refined = true;
  bool consistent = true;
  Json brackets = Json::array();
  for (const auto& b : res.brackets) {
    const bool distinct = b.outcome_lo != b.outcome_hi || b.turning_lo != b.turning_hi;
    refined = refined && distinct && b.width() <= so.bisect_tol;
    Json jb{{"alpha_lo", b.alpha_lo},
            {"alpha_hi", b.alpha_hi},
            {"width", b.width()},
            {"outcome_lo", to_string(b.outcome_lo)},
            {"outcome_hi", to_string(b.outcome_hi)},
            {"turning_lo", b.turning_lo},
            {"turning_hi", b.turning_hi},
            {"bisections", b.bisections},
            {"certified_radius", b.certified_radius},
            {"candidate_min_H", b.candidate_min_H},
            {"nonconstant", b.nonconstant},
            {"accepted", b.accepted}};
    const RadialProfile cand = bracket_candidate(b, P, so.shoot);
    const SignChangeCheck chk = theorem58_check(profile_on_grid(cand, grid), P, 32, c.real("theorem58_tol"));
    consistent = consistent && chk.consistent;
    jb["H_changes_sign"] = chk.h_changes_sign;
    jb["lambda1"] = chk.lambda1;
    jb["sign_change_consistent"] = chk.consistent;
    brackets.push_back(std::move(jb));
  }

  const RadialProfile constant = shoot(kappa(P.p), P, so.shoot);

  Json j;
  j["params"] = params_json(P);
  j["alpha_range"] = Json::array({c.real("alpha_lo"), c.real("alpha_hi")});
  j["count"] = res.points.size();
  j["brackets"] = std::move(brackets);
  j["accepted_candidates"] = res.accepted_candidates;
  j["kappa_outcome"] = to_string(constant.outcome);
  j["kappa_residual"] = constant.residual;

  ExperimentResult r;
  r.files.push_back({"scan.csv", table.str()});
  r.files.push_back({"scan.json", dump(j)});
  r.verdicts["brackets_refined"] = refined;
  r.verdicts["kappa_bounded"] = constant.outcome == ShootOutcome::reached_rmax_bounded;
  r.verdicts["sign_change_consistent"] = consistent;
  r.summary = fmt::format("{} points, {} brackets, {} accepted candidates", res.points.size(), res.brackets.size(),
                          res.accepted_candidates);
  return r;
}

// ---------------------------------------------------------- evolve-rescaled

std::function<double(double)> rescaled_initial(const RunConfig& c, double k) {
  const std::string kind = c.text("initial_w");
  const double amp = c.real("amplitude");
  const double width = c.real("bump_width");
  auto bump = [width](double y) {
    const double t = y * y / (width * width);
    return t < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t)) : 0.0;
  };
  if (kind == "kappa") return [k](double) { return k; };
  if (kind == "zero") return [](double) { return 0.0; };
  if (kind == "gaussian") return [k, amp, width](double y) { return k * amp * std::exp(-y * y / (width * width)); };
  return [k, amp, bump](double y) { return k * (1.0 + amp * bump(y)); };
}

ExperimentResult run_evolve_rescaled(const RunConfig& c) {
  const ProblemParams P = params_of(c);
  const double k = kappa(P.p);
  const auto w0 = rescaled_initial(c, k);
  EvolutionState st = make_rescaled_state(P, c.real("L"), static_cast<int>(c.integer("y_cells")), w0,
                                          static_cast<std::size_t>(c.integer("record_every")));
  st.cap = c.real("escape_factor") * std::max(k, st.w.cwiseAbs().maxCoeff());
  const double E0 = st.energy_history.front().second;
  const double d0 = distance_to_kappa(st);
  evolve_rescaled(st, c.real("ds"), c.real("s_end"));

  double worst_increase = 0.0;
  bool monotone = true;
  for (std::size_t i = 1; i < st.energy_history.size(); ++i) {
    const double prev = st.energy_history[i - 1].second;
    const double inc = st.energy_history[i].second - prev;
    worst_increase = std::max(worst_increase, inc);
    if (inc > 1e-8 * (1.0 + std::abs(prev))) monotone = false;
  }

  CsvTable table({"s", "sup_dev", "E", "dissipation_lhs", "dissipation_rhs"});
  const double s0 = st.snapshots.front().s;
  for (std::size_t i = 0; i < st.snapshots.size(); ++i) {
    const auto& snap = st.snapshots[i];
    const double dev = (snap.w.array() - k).abs().maxCoeff();
    const double E = energy(st.mesh, snap.w, P).E;
    std::string lhs = "nan";
    std::string rhs = "nan";
    if (i >= 4) {
      const DissipationCheck dc = dissipation_check(st, s0, snap.s);
      lhs = csv_number(dc.lhs);
      rhs = csv_number(dc.rhs);
    } else if (i == 0) {
      lhs = rhs = csv_number(0.0);
    }
    table.row({csv_number(snap.s), csv_number(dev), csv_number(E), lhs, rhs});
  }

  const DissipationCheck dc = dissipation_check(st, s0, st.snapshots.back().s);
  Json j;
  j["params"] = params_json(P);
  j["mesh"] = Json{{"dim", st.mesh.dim}, {"L", st.mesh.L}, {"cells", st.mesh.cells}, {"boundary", "neumann"}};
  j["initial_w"] = c.text("initial_w");
  j["ds"] = c.real("ds");
  j["s_end"] = c.real("s_end");
  j["s_final"] = st.s;
  j["steps"] = st.steps;
  j["halted"] = st.halted;
  j["event"] = st.event;
  j["cap"] = st.cap;
  j["E_initial"] = E0;
  j["E_final"] = st.energy_history.back().second;
  j["max_energy_increase"] = worst_increase;
  j["distance_to_kappa"] = Json{{"initial", d0}, {"final", distance_to_kappa(st)}};
  j["dissipation"] = Json{{"s_a", s0},     {"s_b", st.snapshots.back().s}, {"lhs", dc.lhs},
                          {"rhs", dc.rhs}, {"rel_err", dc.rel_err},        {"samples", dc.samples}};
  j["normalization"] = "rho = (4 pi)^{-n/2} exp(-|y|^2/4)";

  ExperimentResult r;
  r.files.push_back({"timeseries.csv", table.str()});
  r.files.push_back({"evolve.json", dump(j)});
  r.verdicts["energy_monotone"] = monotone;
  r.verdicts["dissipation_identity"] = dc.rel_err < 0.02;
  r.summary = fmt::format("s={:.6g}{}, E {:.12g} -> {:.12g}, dissipation rel_err {:.3g}", st.s,
                          st.halted ? " (halted: " + st.event + ")" : std::string(), E0,
                          st.energy_history.back().second, dc.rel_err);
  return r;
}

// ------------------------------------------------------------ blowup/theorem13

PhysicalDomain domain_of(const RunConfig& c) {
  PhysicalDomain d;
  d.dim = static_cast<int>(c.integer("n"));
  d.R = c.real("R");
  d.cells = static_cast<int>(c.integer("x_cells"));
  return d;
}

BlowupOptions blowup_options(const RunConfig& c) {
  BlowupOptions o;
  o.dt_factor = c.real("dt_factor");
  o.dt_max = c.real("dt_max");
  o.u_cap = c.real("u_cap");
  o.t_max = c.real("t_max");
  o.diffusion = c.flag("diffusion");
  o.snapshot_ratio = c.real("snapshot_ratio");
  return o;
}

std::function<double(double)> physical_initial(const RunConfig& c) {
  const double A = c.real("u_amplitude");
  const double R = c.real("R");
  const std::string kind = c.text("initial_u");
  if (kind == "constant") return [A](double) { return A; };
  if (kind == "gaussian") {
    const double floor = std::exp(-4.0);
    return [A, R, floor](double x) { return A * (std::exp(-4.0 * x * x / (R * R)) - floor) / (1.0 - floor); };
  }
  return [A, R](double x) { return A * std::cos(std::numbers::pi * x / (2.0 * R)); };
}

Json run_json(const BlowupRun& run) {
  Json j;
  j["params"] = params_json(run.params);
  j["domain"] = Json{{"dim", run.domain.dim}, {"R", run.domain.R}, {"cells", run.domain.cells},
                     {"geometry", run.domain.radial() ? "ball" : "interval"}};
  j["dt_policy"] = Json{{"dt_factor", run.options.dt_factor}, {"dt_max", run.options.dt_max},
                        {"u_cap", run.options.u_cap},         {"t_max", run.options.t_max},
                        {"diffusion", run.options.diffusion}, {"snapshot_ratio", run.options.snapshot_ratio}};
  j["blew_up"] = run.blew_up;
  j["global_existence"] = run.global_existence;
  j["t"] = run.t;
  j["steps"] = run.steps;
  j["max_u"] = run.sup_history.back().second;
  j["T_est"] = optional_number(run.T_est);
  j["a_est"] = optional_number(run.a_est);
  if (run.fit) {
    j["fit"] = Json{{"T", run.fit->T},
                    {"exponent", run.fit->exponent},
                    {"expected_exponent", 1.0 / (run.params.p - 1.0)},
                    {"log_C", run.fit->log_C},
                    {"rms_residual", run.fit->rms_residual},
                    {"samples", run.fit->samples}};
  } else {
    j["fit"] = nullptr;
  }
  j["min_u"] = run.min_u;
  j["initial_speed_nonnegative"] = run.initial_speed_nonnegative;
  j["snapshots"] = run.snapshots.size();
  j["note"] = run.note;
  return j;
}

void physical_verdicts(const BlowupRun& run, const RunConfig& c, ExperimentResult& r) {
  const double scale = std::max(1.0, run.sup_history.front().second);
  r.verdicts["positivity"] = run.min_u >= -1e-10 * scale;
  if (run.initial_speed_nonnegative) {
    bool increasing = true;
    for (std::size_t i = 1; i < run.sup_history.size(); ++i)
      increasing = increasing && run.sup_history[i].second > run.sup_history[i - 1].second;
    r.verdicts["max_u_increasing"] = increasing;
  }
  if (!run.options.diffusion && c.text("initial_u") == "constant") {
    const double p = run.params.p;
    const double T = std::pow(c.real("u_amplitude"), 1.0 - p) / (p - 1.0);
    r.verdicts["oracle_T"] = run.fit && std::abs(run.fit->T - T) < 1e-4;
    r.verdicts["oracle_exponent"] = run.fit && std::abs(run.fit->exponent - 1.0 / (p - 1.0)) < 1e-3;
  }
}

ExperimentResult run_blowup(const RunConfig& c) {
  const ProblemParams P = params_of(c);
  const BlowupRun run = solve_physical(physical_initial(c), domain_of(c), P, blowup_options(c));

  CsvTable table({"t", "max_u"});
  for (const auto& [t, m] : run.sup_history) table.row({csv_number(t), csv_number(m)});

  ExperimentResult r;
  r.files.push_back({"timeseries.csv", table.str()});
  r.files.push_back({"blowup.json", dump(run_json(run))});
  physical_verdicts(run, c, r);
  r.summary = run.blew_up ? fmt::format("blew up: T_est={:.12g} a_est={:.6g} exponent={:.6g}", *run.T_est, *run.a_est,
                                        run.fit ? run.fit->exponent : std::nan(""))
                          : fmt::format("global existence to t={:.6g}, max u={:.6g}", run.t, run.sup_history.back().second);
  return r;
}

ExperimentResult run_theorem13(const RunConfig& c) {
  const ProblemParams P = params_of(c);
  const BlowupRun run = solve_physical(physical_initial(c), domain_of(c), P, blowup_options(c));
  if (!run.blew_up) throw PreconditionError("theorem13: the run did not blow up (global existence)");

  Theorem13Options o;
  o.K = c.real("K");
  o.y_points = static_cast<int>(c.integer("y_points"));
  o.conv_tol = c.real("conv_tol");
  o.max_y_spacing = c.real("max_y_spacing");
  o.min_snapshots = static_cast<int>(c.integer("min_snapshots"));
  o.h_tol = c.real("h_tol");
  const Theorem13Report rep = theorem13_pipeline(run, o);

  CsvTable table({"t", "s", "sup_dev", "min_H", "y_spacing", "masked"});
  for (const auto& pt : rep.points)
    table.row({csv_number(pt.t), csv_number(pt.s), csv_number(pt.sup_dev), csv_number(pt.min_H),
               csv_number(pt.y_spacing), std::to_string(pt.masked)});

  Json j;
  j["run"] = run_json(run);
  j["T"] = rep.T;
  j["a"] = rep.a;
  j["K"] = o.K;
  j["conv_tol"] = o.conv_tol;
  j["points"] = rep.points.size();
  j["decreasing_tail"] = rep.decreasing_tail;
  j["final_sup_dev"] = rep.points.empty() ? Json(nullptr) : Json(rep.points.back().sup_dev);
  j["converged"] = rep.converged;
  j["H_nonnegative"] = rep.H_nonnegative;
  j["topology"] = "C0 on |y| <= K at finite s";
  j["note"] = rep.note;

  ExperimentResult r;
  r.files.push_back({"theorem13.csv", table.str()});
  r.files.push_back({"theorem13.json", dump(j)});
  physical_verdicts(run, c, r);
  r.verdicts["converged"] = rep.converged;
  r.verdicts["H_nonnegative"] = rep.H_nonnegative;
  r.summary = fmt::format("T={:.12g} a={:.3g}: {} snapshots, decreasing tail {}, final sup|w-kappa|={:.4g}", rep.T,
                          rep.a, rep.points.size(), rep.decreasing_tail,
                          rep.points.empty() ? std::nan("") : rep.points.back().sup_dev);
  return r;
}

}  // namespace

ExperimentResult execute(const RunConfig& config) {
  switch (config.kind()) {
    case Kind::exponents: return run_exponents(config);
    case Kind::verify_identities: return run_verify_identities(config);
    case Kind::spectrum: return run_spectrum(config);
    case Kind::shoot: return run_shoot(config);
    case Kind::scan: return run_scan(config);
    case Kind::evolve_rescaled: return run_evolve_rescaled(config);
    case Kind::blowup: return run_blowup(config);
    case Kind::theorem13: return run_theorem13(config);
  }
  throw UsageError("unknown experiment kind");
}

}  // namespace sslab::app
