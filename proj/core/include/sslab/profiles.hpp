#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sslab/errors.hpp"
#include "sslab/exponents.hpp"
#include "sslab/weighted_calculus.hpp"

namespace sslab {

/// How a shooting trajectory of
///   w_rr + ((n-1)/r - r/2) w_r - w/(p-1) + w^p = 0,  w(0) = alpha, w_r(0) = 0
/// ended.
enum class ShootOutcome {
  /// Reached r_max positive and bounded with H = w/(p-1) + r w_r/2 close to 0,
  /// i.e. on the self-similar decay w ~ r^{-2/(p-1)}.
  converged_to_kappa_like_tail,
  hit_zero,
  blew_up,
  reached_rmax_bounded,
};

std::string to_string(ShootOutcome outcome);

struct ShootOptions {
  double r_max = 20.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double blowup_cap = 1e6;
  /// Taylor start radius; the (n-1)/r term is removed through the series below it.
  /// Capped at 0.002 / sqrt(1 + p alpha^{p-1}); the stored mesh is refined
  /// geometrically towards the origin below 0.02 / sqrt(1 + p alpha^{p-1}).
  double series_radius = 1e-3;
  /// Spacing of the stored uniform mesh.
  double output_spacing = 1e-3;
  /// |H(r_max)| <= tail_tol * max|w| marks the decaying tail.
  double tail_tol = 1e-2;
};

struct RadialProfile {
  ProblemParams params;
  double alpha = 0.0;
  std::vector<double> r;
  std::vector<double> w;
  std::vector<double> w_r;
  ShootOutcome outcome = ShootOutcome::reached_rmax_bounded;
  /// Radius at which integration stopped (event location or r_max).
  double end_radius = 0.0;
  /// Sup-norm residual, see profile_residual().
  double residual = 0.0;
  std::size_t accepted_steps = 0;
  /// Sign changes of w_r beyond the series start, up to end_radius.
  int turning_points = 0;
  /// Integrated trajectory on [0, certified_radius]; beyond it the samples are the
  /// self-similar tail appended by bracket_candidate().
  double certified_radius = 0.0;
};

/// Raised when the adaptive step size underflows; carries the trajectory so far.
class ShootingError : public NumericError {
 public:
  ShootingError(const std::string& what, RadialProfile partial)
      : NumericError(what), partial_(std::move(partial)) {}
  [[nodiscard]] const RadialProfile& partial() const { return partial_; }

 private:
  RadialProfile partial_;
};

/// r^2 coefficient of the regular solution at the origin, (alpha/(p-1) - alpha^p)/(2n).
double series_coefficient(double alpha, const ProblemParams& params);

/// Integrates the radial profile equation from r = 0 with an adaptive
/// Dormand-Prince 5(4) pair and stops at the first event: w <= 0, w > blowup_cap,
/// or r = r_max. Events are located on the dense output; when two fire inside one
/// step the earlier crossing wins. Throws DomainError for alpha <= 0 and
/// ShootingError on step-size underflow.
RadialProfile shoot(double alpha, const ProblemParams& params, const ShootOptions& options = {});

/// Sup over the stored uniform mesh of the larger of
///  - the equation residual with w_rr obtained by differentiating the stored w_r,
///    divided by 1 + the sum of the magnitudes of the equation's terms, and
///  - the mismatch between the stored w_r and the derivative of the stored w in
///    excess of 64 eps |w| / h (the rounding floor of a difference quotient),
///    divided by 1 + |w_r|,
/// with fourth-order differences. The floor of 1 makes this the absolute residual
/// wherever the solution is O(1); the scaling only matters near events.
double profile_residual(const RadialProfile& profile);

struct HPositivity {
  double min_H = 0.0;
  bool positive = false;
};

/// Minimum over the mesh of H = w/(p-1) + r w_r / 2.
HPositivity profile_H_positivity(const RadialProfile& profile);

/// w > 0 and |w| <= 10 max(kappa, alpha) on all of [0, r_max].
bool bounded_positive_acceptance(const RadialProfile& profile, double r_max);

struct ScanPoint {
  double alpha = 0.0;
  ShootOutcome outcome = ShootOutcome::reached_rmax_bounded;
  int turning_points = 0;
  double end_radius = 0.0;
};

/// A shooting-parameter interval whose endpoints end differently. Two
/// trajectories end differently when the outcome or the number of turning points
/// differs: positive trajectories leaving the decaying tail upward fall back and
/// cross zero well below the blow-up cap, so the turning count is what separates
/// them from those leaving downward.
struct Bracket {
  double alpha_lo = 0.0;
  double alpha_hi = 0.0;
  ShootOutcome outcome_lo = ShootOutcome::reached_rmax_bounded;
  ShootOutcome outcome_hi = ShootOutcome::reached_rmax_bounded;
  int turning_lo = 0;
  int turning_hi = 0;
  int bisections = 0;
  /// Filled by scan_profiles() from bracket_candidate().
  double certified_radius = 0.0;
  double candidate_min_H = 0.0;
  bool nonconstant = false;
  bool accepted = false;
  [[nodiscard]] double width() const { return alpha_hi - alpha_lo; }
};

struct ScanOptions {
  ShootOptions shoot;
  double bisect_tol = 1e-10;
  int max_bisections = 200;
  /// Worker threads for the alpha map; 0 uses the hardware concurrency.
  unsigned threads = 0;
};

struct ScanResult {
  ProblemParams params;
  std::vector<ScanPoint> points;
  std::vector<Bracket> brackets;
  /// Nonconstant bracket candidates that pass bounded_positive_acceptance.
  int accepted_candidates = 0;
};

/// Shoots alpha_i = lo + (hi - lo) i / count for i = 1..count, reports brackets
/// where the outcome changes and refines each by bisection to bisect_tol.
/// Results are ordered by alpha regardless of thread count.
ScanResult scan_profiles(const ProblemParams& params, double alpha_lo, double alpha_hi, int count,
                         const ScanOptions& options = {});

/// Trajectory at the lower end of a refined bracket, truncated where the two
/// endpoint trajectories separate by more than sep_tol * max(1, kappa); this is
/// the part of the profile the bracket determines. When the truncated trajectory
/// sits on the decaying tail (|H| <= tail_tol max|w|) it is continued to r_max by
/// w(R)(R/r)^{2/(p-1)} and labelled converged_to_kappa_like_tail.
RadialProfile bracket_candidate(const Bracket& bracket, const ProblemParams& params, const ShootOptions& options = {},
                                double sep_tol = 1e-3);

/// Samples a profile on a radial quadrature grid with gradient and Laplacian.
/// Beyond the end of the profile the self-similar decay w(R)(R/r)^{2/(p-1)} is used.
GridFunction profile_on_grid(const RadialProfile& profile, const GridPtr& grid);

}  // namespace sslab
