#pragma once

// Determination of the bimodule coefficients from the compatibility
// conditions, with the coefficients a1..a4 kept as unknowns.
//
// Each condition is brought to left normal form with MultiPoly
// coefficients; the coefficient of every (normal word, index) pair is a
// polynomial constraint.  The constraints are collected in a linear span,
// a2 and a4 are eliminated linearly, a3 is eliminated by row reduction, and
// the remaining univariate conditions in a1 are solved.

#include <functional>
#include <string>
#include <vector>

#include "esq/first_order.hpp"

namespace esq {

/// The four families of compatibility conditions: the derivative of the
/// sphere relation, the derivatives of the quadratic relations, and the
/// right actions of the sphere relation and the quadratic relations.
template <class C>
struct ConditionForms {
  std::vector<Form<C>> sphere_derivative;
  std::vector<Form<C>> relation_derivative;
  std::vector<Form<C>> sphere_action;
  std::vector<Form<C>> relation_action;

  bool all_zero() const;
};

template <class C>
ConditionForms<C> build_conditions(const SphereAlgebra& x, const BimoduleRules<C>& rules);

/// Linear span of polynomials, row reduced with respect to a monomial
/// ranking (higher rank = eliminated first).
class PolySpan {
 public:
  using Rank = std::function<std::vector<int>(const MultiPoly::Monomial&)>;
  explicit PolySpan(Rank rank);

  /// Returns true if p was not already in the span.
  bool insert(const MultiPoly& p);
  MultiPoly reduce(MultiPoly p) const;
  bool contains(const MultiPoly& p) const { return reduce(p).is_zero(); }
  /// Rows, each monic in its leading monomial.
  std::vector<MultiPoly> rows() const;
  std::size_t rank() const { return rows_.size(); }
  MultiPoly::Monomial leading(const MultiPoly& p) const;

 private:
  Rank rank_;
  std::vector<std::pair<MultiPoly::Monomial, MultiPoly>> rows_;
  bool greater(const MultiPoly::Monomial& a, const MultiPoly::Monomial& b) const;
};

/// Span of {w * theta} inside the free left module, up to a word degree.
class ModuleReducer {
 public:
  ModuleReducer(const SphereAlgebra& x, int max_degree);

  template <class C>
  Form<C> reduce(Form<C> f) const;
  std::size_t rank() const { return rows_.size(); }

 private:
  std::map<FormKey, Form<Scalar>> rows_;
};

enum class Constraint { free, theta_zero };

std::string to_string(Constraint c);

struct ClassificationResult {
  Constraint constraint = Constraint::free;
  int n = 0;
  /// False for N < 6, where the ansatz is not known to be exhaustive.
  bool basis_complete = false;
  /// Row-reduced basis of all extracted constraints.
  std::vector<MultiPoly> constraints;
  /// Linear relations used to eliminate a2 (and a4 for the free ansatz), as p = 0.
  std::vector<MultiPoly> eliminations;
  /// True if the a2 relation is a2 = q a1 - 1.
  bool a2_relation_expected = false;
  /// Conditions on a1 alone after elimination.
  std::vector<MultiPoly> univariate;
  /// Monic gcd of the univariate conditions.
  MultiPoly a1_polynomial;
  /// Each solution lists a1..a4 (free) or a1, a2 (theta-zero).
  std::vector<std::vector<Scalar>> solutions;
  bool solvable = false;
  /// Some unknown is not fixed by the conditions.
  bool underdetermined = false;
  /// Witness polynomials contained in the univariate span (theta-zero).
  std::vector<MultiPoly> witnesses;
  bool witnesses_found = false;
  std::vector<std::string> notes;
};

ClassificationResult classify(Constraint constraint, int n);

/// a4 in terms of a1..a3 as predicted in closed form:
/// a4 = -1 - q^{N-1} a1 - a2 - q^2 (1+q^{N-2})(1-q^{-N})/(q^2-1) a3.
MultiPoly predicted_a4_relation(int n);

}  // namespace esq
