#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qtw/laurent.hpp"
#include "qtw/rational.hpp"

namespace qtw {

/// Dense univariate polynomial over Q, ascending coefficients, no trailing zeros.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs);
  static Poly constant(const Rational& c);
  static Poly monomial(int degree, const Rational& c = 1);

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  const Rational& lead() const { return c_.back(); }

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const Rational& c) const;
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  /// Euclidean division; throws on division by zero.
  static void divmod(const Poly& a, const Poly& b, Poly& quotient, Poly& remainder);
  /// Monic gcd (zero if both are zero).
  static Poly gcd(Poly a, Poly b);
  Poly monic() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Element of the field Q(q): reduced fraction with monic denominator.
/// Used only where Gaussian elimination needs arbitrary pivots; results are
/// converted back to LaurentScalar.
class RatFunc {
 public:
  RatFunc() : den_(Poly::constant(1)) {}
  RatFunc(const LaurentScalar& s);  // NOLINT(google-explicit-constructor)
  RatFunc(Poly num, Poly den);

  bool is_zero() const { return num_.is_zero(); }
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  RatFunc operator-() const;
  friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

  /// Back to the localized Laurent ring; nullopt when the denominator has a
  /// factor other than q and q^2 + 1.
  std::optional<LaurentScalar> to_laurent() const;
  Rational eval(const Rational& q0) const;
  std::string str() const;

 private:
  void reduce();
  Poly num_, den_;
};

/// Sparse row over Q(q): column -> nonzero coefficient.
using SparseRow = std::map<std::size_t, RatFunc>;

/// Reduced row echelon form over Q(q), in place. Columns are eliminated in
/// ascending index order. Returns the pivot column of each surviving row, in
/// row order; zero rows are removed.
std::vector<std::size_t> rref(std::vector<SparseRow>& rows);

}  // namespace qtw
