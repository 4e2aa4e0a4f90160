#pragma once

#include <cmath>
#include <vector>

namespace sslab::oracle {

/// Fixed-step classical Runge-Kutta integration of
///   w'' + ((n-1)/r - r/2) w' - w/(p-1) + w^p = 0,  w(0) = alpha, w'(0) = 0,
/// started at r0 from the two-term series alpha + c r^2 + d r^4. Stops at r_end
/// or when w leaves (0, cap). Samples are (r, w, w') at every step.
struct Rk4Trajectory {
  std::vector<double> r, w, dw;
  bool stopped_early = false;

  /// Cubic Hermite interpolation between steps.
  [[nodiscard]] double value(double x) const {
    if (x <= r.front()) return w.front();
    std::size_t i = static_cast<std::size_t>((x - r.front()) / (r[1] - r[0]));
    if (i + 1 >= r.size()) i = r.size() - 2;
    const double h = r[i + 1] - r[i];
    const double t = (x - r[i]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * w[i] + h10 * h * dw[i] + h01 * w[i + 1] + h11 * h * dw[i + 1];
  }
};

inline Rk4Trajectory rk4_shoot(double alpha, int n, double p, double r_end, double h = 1e-4, double r0 = 1e-3,
                               double cap = 1e6) {
  auto g = [p](double v) { return std::pow(std::abs(v), p - 1.0) * v - v / (p - 1.0); };
  const double g0 = g(alpha);
  const double dg0 = p * std::pow(alpha, p - 1.0) - 1.0 / (p - 1.0);
  const double c = -g0 / (2.0 * n);
  const double d = c * (1.0 - dg0) / (4.0 * n + 8.0);

  auto rhs = [&](double r, double w, double dw, double& a, double& b) {
    a = dw;
    b = -((n - 1) / r - 0.5 * r) * dw - g(w);
  };

  Rk4Trajectory out;
  double r = r0;
  double w = alpha + c * r0 * r0 + d * r0 * r0 * r0 * r0;
  double dw = 2.0 * c * r0 + 4.0 * d * r0 * r0 * r0;
  out.r.push_back(r);
  out.w.push_back(w);
  out.dw.push_back(dw);
  const long steps = std::lround((r_end - r0) / h);
  for (long k = 0; k < steps; ++k) {
    double a1, b1, a2, b2, a3, b3, a4, b4;
    rhs(r, w, dw, a1, b1);
    rhs(r + 0.5 * h, w + 0.5 * h * a1, dw + 0.5 * h * b1, a2, b2);
    rhs(r + 0.5 * h, w + 0.5 * h * a2, dw + 0.5 * h * b2, a3, b3);
    rhs(r + h, w + h * a3, dw + h * b3, a4, b4);
    w += h / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4);
    dw += h / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4);
    r = r0 + (k + 1) * h;
    out.r.push_back(r);
    out.w.push_back(w);
    out.dw.push_back(dw);
    if (!(w > 0.0) || w > cap) {
      out.stopped_early = true;
      break;
    }
  }
  return out;
}

}  // namespace sslab::oracle
