#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sslab/exponents.hpp"

namespace sslab {

/// Uniform mesh with u = 0 on the boundary: the interval [-R, R] for n = 1,
/// the radial segment [0, R] of the ball B_R for n >= 2 (radial data only).
struct PhysicalDomain {
  int dim = 1;
  double R = 1.0;
  int cells = 400;

  [[nodiscard]] bool radial() const { return dim >= 2; }
  [[nodiscard]] double spacing() const;
  [[nodiscard]] std::vector<double> nodes() const;
};

struct BlowupOptions {
  /// dt <= dt_factor * (max u)^{1-p} * min(1, 1/(p-1)), and dt <= dt_max.
  double dt_factor = 0.2;
  double dt_max = 1e-2;
  /// Runs also stop as blow-up once the step drops below 1e-10 max(1, t), where
  /// T - t is no longer resolved in double precision.
  double u_cap = 1e8;
  /// Reaching t_max without hitting u_cap labels the run global-existence.
  double t_max = 10.0;
  /// Off: u' = |u|^{p-1} u pointwise and no boundary condition (oracle mode).
  bool diffusion = true;
  /// A snapshot is stored each time max u grows by this factor.
  double snapshot_ratio = 1.1;
};

struct PhysicalSnapshot {
  double t = 0.0;
  Eigen::VectorXd u;
};

struct TypeIFit {
  double T = 0.0;
  /// Fitted beta in max u ~ C (T - t)^{-beta}; type I means beta = 1/(p-1).
  double exponent = 0.0;
  double log_C = 0.0;
  double rms_residual = 0.0;
  std::size_t samples = 0;
};

struct BlowupRun {
  ProblemParams params;
  PhysicalDomain domain;
  BlowupOptions options;
  double t = 0.0;
  std::size_t steps = 0;
  Eigen::VectorXd u;
  /// (t, max u) after every step, starting with the initial data.
  std::vector<std::pair<double, double>> sup_history;
  std::vector<PhysicalSnapshot> snapshots;
  bool blew_up = false;
  bool global_existence = false;
  std::optional<TypeIFit> fit;
  /// Blow-up time and point estimates (set when blew_up).
  std::optional<double> T_est;
  std::optional<double> a_est;
  /// min u over all steps, for the positivity check.
  double min_u = 0.0;
  /// Whether Δphi + phi^p >= 0 held at every interior node initially.
  bool initial_speed_nonnegative = false;
  std::string note;
};

/// Integrates u_t = Δu + |u|^{p-1} u by Lie splitting: the exact reaction flow
///   u -> u (1 - (p-1) dt |u|^{p-1})^{-1/(p-1)}
/// followed by a backward-Euler diffusion step with second-order differences.
/// Both substeps preserve u >= 0. Halts when max u >= u_cap (blew_up, with the
/// type-I fit) or at t_max (global_existence).
BlowupRun solve_physical(const std::function<double(double)>& u0, const PhysicalDomain& domain,
                         const ProblemParams& params, const BlowupOptions& options = {});

/// Least-squares fit of log M = log C - beta log(T - t) over the samples with
/// M >= M_last / 10, minimized over T by golden-section search in log(T - t_last).
/// Throws PreconditionError with fewer than 8 samples in the last decade.
TypeIFit fit_type_one(const std::vector<std::pair<double, double>>& sup_history);

/// w(y) = (T - t)^{1/(p-1)} u(a + y sqrt(T - t)) at the requested y values
/// (signed for n = 1, radii for n >= 2), by cubic interpolation of u.
struct RescaledSample {
  double s = 0.0;
  std::vector<double> y;
  std::vector<double> w;
  /// False where a + y sqrt(T - t) leaves the domain; those entries are masked.
  std::vector<bool> valid;
  std::size_t masked = 0;
};

RescaledSample rescale_to_similarity(const PhysicalSnapshot& snapshot, const PhysicalDomain& domain,
                                     const ProblemParams& params, double a, double T, const std::vector<double>& y);

struct Theorem13Options {
  /// |y| <= K is the compact set on which w is compared with kappa.
  double K = 1.0;
  int y_points = 201;
  double conv_tol = 0.05;
  /// Snapshots whose mesh spacing in y, h / sqrt(T - t), exceeds this are skipped.
  double max_y_spacing = 0.05;
  /// Snapshots earlier than this rescaled time are skipped.
  double s_min = 0.0;
  int min_snapshots = 3;
  /// H >= -h_tol counts as nonnegative.
  double h_tol = 1e-6;
};

struct Theorem13Point {
  double t = 0.0;
  double s = 0.0;
  double sup_dev = 0.0;  // sup_{|y|<=K} |w - kappa|
  double min_H = 0.0;    // min_{|y|<=K} w/(p-1) + y w_y / 2
  double y_spacing = 0.0;
  std::size_t masked = 0;
};

struct Theorem13Report {
  double T = 0.0;
  double a = 0.0;
  std::vector<Theorem13Point> points;
  /// Length of the final strictly decreasing run of sup_dev.
  int decreasing_tail = 0;
  bool converged = false;
  bool H_nonnegative = false;
  std::string note;
};

/// Rescales the stored snapshots around (a_est, T_est) and tracks
/// sup_{|y|<=K} |w - kappa| along increasing s. Converged means the final
/// strictly decreasing run has at least min_snapshots entries and ends below
/// conv_tol. This is a C^0-on-compacts, finite-s statement. Throws
/// PreconditionError when the run did not blow up or too few snapshots remain.
Theorem13Report theorem13_pipeline(const BlowupRun& run, const Theorem13Options& options = {});

/// A run whose snapshots are the exact solution kappa (T - t)^{-1/(p-1)} at the
/// given times, with the sup history at the same times.
BlowupRun synthetic_exact_run(const ProblemParams& params, const PhysicalDomain& domain, double T,
                              const std::vector<double>& times);

}  // namespace sslab
