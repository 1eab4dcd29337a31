#pragma once

// The calculi at q = 1.
//
// At q = 1, Rinv^{kl}_{ij} x_k dx_l becomes x_j dx_i, K^{kl}_{ij} x_k dx_l
// becomes delta_{ij'} theta and C^{kl} x_i x_j x_k dx_l becomes x_i x_j theta,
// so the bimodule rule reads
//   dx_i x_j = a1 x_j dx_i + a2 x_i dx_j + a3 delta_{ij'} theta + a4 x_i x_j theta.

#include <array>
#include <string>
#include <vector>

#include "esq/first_order.hpp"

namespace esq {

struct ClassicalLimit {
  Sign sign = Sign::plus;
  int n = 0;
  /// Limits of a1..a4.
  std::array<Rational, 4> a;
  /// Limit of the coefficient of dx_i in theta x_i - x_i theta.
  Rational theta_commutator;
  /// Rinv tends to the flip, K to C (x) C and C to delta_{kl'}.
  bool tensors_classical = false;
  /// The rule differs from dx_i x_j = x_j dx_i.
  bool noncommutative = false;
};

/// Limits computed from the calculus coefficients.
ClassicalLimit classical_limit_table(Sign sign, int n);

/// The q = 1 rule as predicted in closed form:
/// Gamma+: (1, 0, -2/(N-1), 2/(N-1)), theta commutator 0;
/// Gamma-: (-1, -2, 0, 2), theta commutator -2.
std::array<Rational, 4> expected_classical_coefficients(Sign sign, int n);
Rational expected_theta_commutator_limit(Sign sign);

/// "dx_i x_j = x_j dx_i - 2/(N-1) delta_{ij'} theta + ..." text.
std::string to_string(const ClassicalLimit& l);

}  // namespace esq
