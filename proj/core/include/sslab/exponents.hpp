#pragma once

#include <compare>
#include <optional>
#include <string>

namespace sslab {

/// Dimension and nonlinearity exponent of u_t = Δu + |u|^{p-1}u.
struct ProblemParams {
  int n = 1;
  double p = 2.0;

  /// Throws DomainError unless n >= 1 and p > 1.
  void validate() const;
};

/// A real number or +infinity. Infinity is a state, not a large sentinel.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr explicit ExtendedReal(double value) : value_(value) {}

  static constexpr ExtendedReal infinity() { return ExtendedReal{}; }

  [[nodiscard]] constexpr bool is_infinite() const { return !value_.has_value(); }
  [[nodiscard]] constexpr bool is_finite() const { return value_.has_value(); }
  /// Finite value; throws std::bad_optional_access for +infinity.
  [[nodiscard]] constexpr double value() const { return value_.value(); }
  /// IEEE view (+inf for the infinite state), for printing and arithmetic.
  [[nodiscard]] double to_double() const;
  [[nodiscard]] std::string to_string() const;

  friend std::partial_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b);
  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) = default;
  friend std::partial_ordering operator<=>(const ExtendedReal& a, double b);
  friend bool operator==(const ExtendedReal& a, double b);

 private:
  std::optional<double> value_;
};

struct CriticalExponents {
  ExtendedReal sobolev;          // p_S
  ExtendedReal joseph_lundgren;  // p_JL
  ExtendedReal lepin;            // p_L
};

/// The constant self-similar profile (1/(p-1))^{1/(p-1)}. Throws DomainError for p <= 1.
double kappa(double p);

/// Sobolev, Joseph-Lundgren and Lepin exponents for dimension n >= 1.
CriticalExponents critical_exponents(int n);

/// True iff m^2 - p(2m-1) < 0 and m > 1/2 (the admissible range of the
/// weighted integrability estimate). Throws DomainError for p <= 1.
bool m_condition(double p, double m);

/// Whether m = (p-1)/2 is admissible, i.e. p > 1 + sqrt(4/3).
bool half_exponent_admissible(double p);

/// The threshold 1 + sqrt(4/3) above which m = (p-1)/2 may be used.
double half_exponent_threshold();

}  // namespace sslab
