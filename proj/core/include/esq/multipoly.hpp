#pragma once

// Polynomials in a handful of unknowns with coefficients in Q(s).
//
// The classification engine uses them for the ansatz coefficients a1..a4;
// nothing here is specific to that use beyond the default variable names.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "esq/scalar.hpp"

namespace esq {

class MultiPoly {
 public:
  static constexpr int kVariables = 4;
  using Monomial = std::array<std::uint8_t, kVariables>;

  MultiPoly() = default;
  MultiPoly(const Scalar& c);  // NOLINT(google-explicit-constructor)
  MultiPoly(long c) : MultiPoly(Scalar(c)) {}  // NOLINT(google-explicit-constructor)

  /// The unknown with 0-based index `var`.
  static MultiPoly variable(int var);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Scalar constant_term() const;
  int total_degree() const;
  int degree_in(int var) const;
  /// True if no variable other than `var` occurs.
  bool is_univariate_in(int var) const;

  const std::map<Monomial, Scalar>& terms() const { return terms_; }
  Scalar coefficient(const Monomial& m) const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const MultiPoly& o);
  MultiPoly& operator*=(const Scalar& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const Scalar& c) { return a *= c; }
  friend MultiPoly operator*(const Scalar& c, MultiPoly a) { return a *= c; }

  bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const MultiPoly& o) const { return !(*this == o); }

  MultiPoly substitute(int var, const MultiPoly& value) const;
  Scalar evaluate(const std::array<Scalar, kVariables>& values) const;

  /// Coefficients of a polynomial in `var` alone, lowest degree first.
  std::vector<Scalar> univariate_coefficients(int var) const;
  static MultiPoly from_univariate(const std::vector<Scalar>& coeffs, int var);

  /// Highest-degree-first text, e.g. "a1^2 - (q^2 + 1)/q*a1 + 1".
  std::string to_string(const std::array<std::string, kVariables>& names = {"a1", "a2", "a3", "a4"}) const;

 private:
  std::map<Monomial, Scalar> terms_;
  void add_term(const Monomial& m, const Scalar& c);
};

/// Monic gcd of two polynomials in the single unknown `var`.
MultiPoly univariate_gcd(const MultiPoly& a, const MultiPoly& b, int var);

/// Roots in Q(s) of a univariate polynomial of degree <= 2 in `var`.
/// Returns nullopt if the degree is higher or the roots are not in Q(s).
std::optional<std::vector<Scalar>> univariate_roots(const MultiPoly& p, int var);

/// Square root in Q(s), if one exists.
std::optional<Scalar> scalar_sqrt(const Scalar& x);

}  // namespace esq
