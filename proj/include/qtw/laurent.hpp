#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qtw/rational.hpp"

namespace qtw {

/// Exact element of Q[q, q^-1] localized at the quantum integer [2] = q + q^-1.
///
/// The value is numerator / (q + q^-1)^k with k >= 0. The representation is
/// canonical: the numerator stores no zero coefficients, terms are kept in
/// ascending exponent order, and when k > 0 the numerator is not divisible by
/// q + q^-1. Scalars without a denominator are plain Laurent polynomials,
/// which is the common case; the localization only appears for the GL_q
/// projectors and the 1/(q + q^-1) normalizations built on them.
class LaurentScalar {
 public:
  using Term = std::pair<int, Rational>;

  LaurentScalar() = default;
  LaurentScalar(long value);  // NOLINT(google-explicit-constructor)
  LaurentScalar(const Rational& value);  // NOLINT(google-explicit-constructor)

  /// c * q^e
  static LaurentScalar monomial(int exponent, const Rational& coeff = 1);
  static LaurentScalar q() { return monomial(1); }
  /// q + q^-1
  static LaurentScalar q_int2();
  /// q - q^-1
  static LaurentScalar q_diff();

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Numerator terms in ascending exponent order.
  const std::vector<Term>& terms() const { return terms_; }
  int denominator_power() const { return den_; }

  LaurentScalar& operator+=(const LaurentScalar& o);
  LaurentScalar& operator-=(const LaurentScalar& o);
  LaurentScalar& operator*=(const LaurentScalar& o);
  friend LaurentScalar operator+(LaurentScalar a, const LaurentScalar& b) { return a += b; }
  friend LaurentScalar operator-(LaurentScalar a, const LaurentScalar& b) { return a -= b; }
  friend LaurentScalar operator*(const LaurentScalar& a, const LaurentScalar& b);
  LaurentScalar operator-() const;

  friend bool operator==(const LaurentScalar& a, const LaurentScalar& b) {
    return a.den_ == b.den_ && a.terms_ == b.terms_;
  }

  /// q -> q^-1.
  LaurentScalar bar() const;
  /// Exact value at q = q0. Throws std::domain_error when q0 == 0.
  Rational eval(const Rational& q0) const;
  /// Constant scalar equal to eval(q0).
  LaurentScalar specialize(const Rational& q0) const { return LaurentScalar(eval(q0)); }

  /// Multiplicative inverse when this is c q^e (q + q^-1)^m; nullopt otherwise.
  std::optional<LaurentScalar> inverse() const;
  /// Divides by (q + q^-1)^k.
  LaurentScalar div_q_int2(int k = 1) const;

  /// Canonical rendering, ascending exponents: "-q^-1 + 2 + q^3".
  std::string str() const;

  std::size_t hash() const;

 private:
  void normalize();

  std::vector<Term> terms_;
  int den_ = 0;
};

inline LaurentScalar operator/(const LaurentScalar& a, const LaurentScalar& b) {
  auto inv = b.inverse();
  if (!inv) throw std::domain_error("division by a non-unit Laurent scalar: " + b.str());
  return a * *inv;
}

}  // namespace qtw
