#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sslab/exponents.hpp"
#include "sslab/weighted_calculus.hpp"

namespace sslab {

/// Uniform mesh on the ball B_L in similarity variables: the interval [-L, L]
/// for n = 1 and the radial segment [0, L] for n >= 2 (radial functions only).
///
/// The rescaled operator is written in divergence form,
///   Δw - y.grad w / 2 = (r^{n-1} rho)^{-1} d/dr (r^{n-1} rho dw/dr),  rho = e^{-r^2/4},
/// and discretized with cell masses m_i and face conductances a_f, so that the
/// discrete operator is symmetric in the m-weighted inner product and has
/// no-flux (Neumann) ends.
struct RescaledMesh {
  int dim = 1;
  double L = 8.0;
  int cells = 800;
  /// Node coordinates (signed y for n = 1, r for n >= 2).
  std::vector<double> y;
  /// m_i ~ int over the cell of r^{n-1} rho dr.
  std::vector<double> mass;
  /// a_f ~ r_f^{n-1} rho(r_f) / h between nodes f and f + 1.
  std::vector<double> conductance;
  /// Multiplies masses so that sums approximate integrals against the normalized
  /// density (4 pi)^{-n/2} e^{-|y|^2/4} dy.
  double normalization = 0.0;

  static RescaledMesh make(int dim, double L, int cells);
  [[nodiscard]] double spacing() const { return y[1] - y[0]; }
  [[nodiscard]] std::size_t size() const { return y.size(); }
  /// Discrete Δw - y.grad w / 2.
  [[nodiscard]] Eigen::VectorXd apply_ou(const Eigen::VectorXd& w) const;
  /// Sum of m_i f_i times the normalization.
  [[nodiscard]] double integrate(const Eigen::VectorXd& f) const;
};

/// E = dirichlet + quadratic - potential.
struct EnergyValue {
  double E = 0.0;
  double dirichlet = 0.0;
  double quadratic = 0.0;
  double potential = 0.0;
};

/// E(w) = int [|grad w|^2/2 + w^2/(2(p-1)) - |w|^{p+1}/(p+1)] rho dy with the
/// normalized density rho = (4 pi)^{-n/2} e^{-|y|^2/4}. Requires the gradient.
EnergyValue energy(const GridFunction& w, const ProblemParams& params);

/// The discrete energy that the rescaled scheme dissipates.
EnergyValue energy(const RescaledMesh& mesh, const Eigen::VectorXd& w, const ProblemParams& params);

struct Snapshot {
  double s = 0.0;
  Eigen::VectorXd w;
};

struct EvolutionState {
  ProblemParams params;
  RescaledMesh mesh;
  Eigen::VectorXd w;
  double s = 0.0;
  std::size_t steps = 0;
  /// (s, E) after every step, starting with the initial state.
  std::vector<std::pair<double, double>> energy_history;
  /// Stored every record_every steps, starting with the initial state.
  std::vector<Snapshot> snapshots;
  std::size_t record_every = 1;
  /// |w| beyond this halts the run.
  double cap = 1e6;
  bool halted = false;
  std::string event;
};

/// Initial state on a fresh mesh; w0 receives the node coordinate.
EvolutionState make_rescaled_state(const ProblemParams& params, double L, int cells,
                                   const std::function<double(double)>& w0, std::size_t record_every = 1);

/// One step of
///   (w^{k+1} - w^k)/ds = A w^{k+1} - w^{k+1}/(p-1) + |w^k|^{p-1} w^k,
/// the implicit part being the convex part of the energy. This splitting
/// dissipates the discrete energy for every ds > 0. The update is carried out
/// for z = w/kappa - 1, in which w = kappa is an exact fixed point and w = 0
/// is preserved up to rounding.
/// When max|w| exceeds the cap the state is marked halted and left unchanged.
void step_rescaled(EvolutionState& state, double ds);

/// Steps until s_end (or a halt) with step ds.
void evolve_rescaled(EvolutionState& state, double ds, double s_end);

struct DissipationCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
  std::size_t samples = 0;
};

/// lhs = int_{s_a}^{s_b} int |w_s|^2 rho dy ds from centered differences of the
/// stored snapshots and the trapezoidal rule in s; rhs = E(s_a) - E(s_b).
/// rel_err = |lhs - rhs| / max(|rhs|, 1e-12). Throws PreconditionError when fewer
/// than 5 snapshots fall in [s_a, s_b].
DissipationCheck dissipation_check(const EvolutionState& trajectory, double s_a, double s_b);

/// Samples the mesh function (extended constantly past |y| = L) on a quadrature
/// grid of matching dimension, with gradient and Laplacian from the cubic
/// interpolant of centered differences.
GridFunction state_on_grid(const EvolutionState& state, const GridPtr& grid);

/// sup over the mesh of |w - kappa|.
double distance_to_kappa(const EvolutionState& state);

}  // namespace sslab
