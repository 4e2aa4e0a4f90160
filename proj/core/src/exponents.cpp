#include "sslab/exponents.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sslab/errors.hpp"

namespace sslab {

void ProblemParams::validate() const {
  if (n < 1) throw DomainError("dimension n must be >= 1, got " + std::to_string(n));
  if (!(p > 1.0)) throw DomainError("exponent p must exceed 1, got " + std::to_string(p));
}

double ExtendedReal::to_double() const {
  return value_ ? *value_ : std::numeric_limits<double>::infinity();
}

std::string ExtendedReal::to_string() const {
  if (!value_) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << *value_;
  return os.str();
}

std::partial_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) {
  if (a.is_infinite() && b.is_infinite()) return std::partial_ordering::equivalent;
  if (a.is_infinite()) return std::partial_ordering::greater;
  if (b.is_infinite()) return std::partial_ordering::less;
  return *a.value_ <=> *b.value_;
}

std::partial_ordering operator<=>(const ExtendedReal& a, double b) {
  if (std::isnan(b)) return std::partial_ordering::unordered;
  if (a.is_infinite()) {
    return std::isinf(b) && b > 0 ? std::partial_ordering::equivalent
                                  : std::partial_ordering::greater;
  }
  return *a.value_ <=> b;
}

bool operator==(const ExtendedReal& a, double b) {
  return (a <=> b) == std::partial_ordering::equivalent;
}

double kappa(double p) {
  if (!(p > 1.0)) throw DomainError("kappa requires p > 1, got " + std::to_string(p));
  // x^y = exp(y log x) with x = 1/(p-1) > 0.
  const double inv = 1.0 / (p - 1.0);
  return std::exp(inv * std::log(inv));
}

CriticalExponents critical_exponents(int n) {
  if (n < 1) throw DomainError("dimension n must be >= 1, got " + std::to_string(n));
  CriticalExponents out;
  const double nd = n;
  if (n >= 3) out.sobolev = ExtendedReal{(nd + 2.0) / (nd - 2.0)};
  if (n >= 11) {
    out.joseph_lundgren =
        ExtendedReal{1.0 + 4.0 * (nd - 4.0 + 2.0 * std::sqrt(nd - 1.0)) / ((nd - 2.0) * (nd - 10.0))};
    out.lepin = ExtendedReal{1.0 + 6.0 / (nd - 10.0)};
  }
  return out;
}

bool m_condition(double p, double m) {
  if (!(p > 1.0)) throw DomainError("m_condition requires p > 1, got " + std::to_string(p));
  return m > 0.5 && m * m - p * (2.0 * m - 1.0) < 0.0;
}

bool half_exponent_admissible(double p) { return m_condition(p, 0.5 * (p - 1.0)); }

double half_exponent_threshold() { return 1.0 + std::sqrt(4.0 / 3.0); }

}  // namespace sslab
