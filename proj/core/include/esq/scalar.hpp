#pragma once

// Exact arithmetic in Q(s), s = q^{1/2}.
//
// Every coefficient the engine manipulates lives in the field of rational
// functions of s with rational coefficients.  Working in s instead of q keeps
// all exponents integral: the metric weights q^{-rho_i} are half-integral
// powers of q when N is odd.

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace esq {

using Rational = mpq_class;

/// Laurent polynomial in s with rational coefficients.
///
/// Stored densely from the lowest to the highest exponent; the first and the
/// last stored coefficient are nonzero and the zero polynomial stores nothing.
class LaurentPoly {
 public:
  LaurentPoly() = default;

  static LaurentPoly constant(const Rational& c);
  static LaurentPoly monomial(const Rational& c, int exponent);
  static LaurentPoly from_terms(const std::map<int, Rational>& terms);

  bool is_zero() const { return c_.empty(); }
  bool is_one() const;
  bool is_monomial() const { return c_.size() == 1; }
  /// Lowest / highest exponent.  Undefined for the zero polynomial.
  int low() const { return low_; }
  int high() const { return low_ + static_cast<int>(c_.size()) - 1; }
  std::size_t term_count() const;

  Rational coefficient(int exponent) const;
  const Rational& leading() const { return c_.back(); }
  const Rational& trailing() const { return c_.front(); }
  std::map<int, Rational> terms() const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);

  LaurentPoly scaled(const Rational& c) const;
  LaurentPoly shifted(int by) const;

  Rational at_one() const;
  Rational evaluate(const Rational& s) const;

  bool operator==(const LaurentPoly& o) const { return low_ == o.low_ && c_ == o.c_; }
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  friend class PolyOps;
  int low_ = 0;
  std::vector<Rational> c_;
  void trim();
};

/// Monic gcd of the polynomial parts (powers of s stripped).  Lowest exponent 0.
LaurentPoly poly_gcd(const LaurentPoly& a, const LaurentPoly& b);

/// Exact quotient a / b.  Throws Error when b does not divide a.
LaurentPoly exact_quotient(const LaurentPoly& a, const LaurentPoly& b);

/// Division with remainder of ordinary polynomials (both with low() >= 0).
std::pair<LaurentPoly, LaurentPoly> poly_divmod(const LaurentPoly& a, const LaurentPoly& b);

/// Exact polynomial square root up to sign, if one exists.
bool poly_sqrt(const LaurentPoly& a, LaurentPoly& root);

/// Element of Q(s) in canonical form.
///
/// The denominator has lowest exponent 0 and leading coefficient 1, and it
/// is coprime to the numerator, so two scalars are equal iff their
/// components are equal.
class Scalar {
 public:
  Scalar() : den_(LaurentPoly::constant(1)) {}
  Scalar(long c);  // NOLINT(google-explicit-constructor)
  Scalar(const Rational& c);  // NOLINT(google-explicit-constructor)
  explicit Scalar(LaurentPoly p);

  /// q^{e/2}
  static Scalar s_power(int e);
  /// q^e
  static Scalar q_power(int e) { return s_power(2 * e); }
  static Scalar q() { return s_power(2); }

  const LaurentPoly& numerator() const { return num_; }
  const LaurentPoly& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }
  /// Single-term polynomial (c * s^e).
  bool is_monomial() const { return den_.is_one() && num_.is_monomial(); }

  Scalar inverse() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  bool operator==(const Scalar& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  /// Value at a rational point s (oracle use).  Throws DivisionByZero at a pole.
  Rational evaluate(const Rational& s) const;

  /// Canonical text in q-notation, e.g. "(q^2 - 1)/(q + q^(1/2))".
  std::string to_string() const;

 private:
  friend Scalar normalize(LaurentPoly num, LaurentPoly den);
  LaurentPoly num_;
  LaurentPoly den_;
};

/// Canonical representative of num/den.  Throws DivisionByZero if den == 0.
Scalar normalize(LaurentPoly num, LaurentPoly den);

/// Value at q = 1 after cancellation.  Throws PoleAtOne.
Rational limit_q1(const Scalar& x);

bool equals(const Scalar& a, const Scalar& b);

Scalar pow(const Scalar& x, int e);

/// Text for use as a factor in a product: wrapped in parentheses unless it is
/// a single signed term.
std::string factor_string(const Scalar& x);

std::string rational_string(const Rational& r);

/// Text of a sum of coefficient * body terms, e.g. "x_1 - q^-1*x_2 + (q + 1)".
/// An empty body denotes a bare scalar.
std::string format_sum(const std::vector<std::pair<Scalar, std::string>>& terms);

}  // namespace esq
