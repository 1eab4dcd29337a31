#pragma once

// Antisymmetrised higher order forms over Gamma+ in the gamma+ basis.
//
// A WedgeForm is a free left-module combination of ordered products
// g_{i1} ^ ... ^ g_{is}, the index sequence packed into a Word.  In the
// calculus with d theta = 0 the pair relation
//   Rinv^{kl}_{ij} g_k ^ g_l + q g_i ^ g_j = 0
// turns every non-increasing pair into increasing pairs of the same index
// sum; wedge_normal_form applies it at the leftmost violation until every
// index sequence is strictly increasing.

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "esq/first_order.hpp"

namespace esq {

using WedgeForm = LinComb<WedgeKey>;
/// Constant coefficient combination of index sequences.
using IndexForm = LinComb<Word>;

/// "c*x_1*g+_1^g+_2 + ..." text, leading terms first.
std::string to_string(const WedgeForm& w);

WedgeForm wedge_word(const std::vector<int>& indices, const Scalar& c = Scalar(1L));
int wedge_grade(const WedgeKey& key);

struct WedgeReduction {
  WedgeForm result;
  /// Rewriting steps taken on distinct index sequences.
  std::size_t steps = 0;
  /// Every step lowered the partial sum at the rewritten position by at
  /// least one and kept every other partial sum.
  bool measure_decreased = true;
};

class WedgeCalculus {
 public:
  /// The calculus must be Gamma+.
  explicit WedgeCalculus(const FirstOrderCalculus& gamma);

  const FirstOrderCalculus& first_order() const { return g_; }
  int dimension() const { return n_; }

  /// g_i ^ g_j for i >= j as a combination of increasing pairs.
  const IndexForm& pair_rule(int i, int j) const;
  /// Rank of the pair relations; N(N+1)/2 when every non-increasing pair has a rule.
  int pair_relation_rank() const { return pair_rank_; }

  WedgeReduction reduce(const WedgeForm& w) const;
  WedgeForm normal_form(const WedgeForm& w) const { return reduce(w).result; }
  /// Normal form of a constant index sequence.
  IndexForm normal_form(const Word& indices) const;

  /// Dimension of grade s of the constant coefficient quotient: C(N,s)
  /// increasing words minus the rank of the normal forms of all ideal
  /// generators of grade s.
  int graded_dimension(int s) const;

  /// Right multiplication by algebra elements through the gamma+ rules.
  WedgeForm right_mult(const WedgeForm& w, const AlgebraElement& a) const;
  /// Product in the tensor algebra: (u g_I) (v g_J) = u (g_I v) g_J.
  WedgeForm product(const WedgeForm& a, const WedgeForm& b) const;

  /// d theta = C^{ij} dx_i ^ dx_j written in the gamma+ basis, unreduced.
  WedgeForm d_theta() const;

 private:
  const FirstOrderCalculus& g_;
  int n_;
  int pair_rank_ = 0;
  std::vector<IndexForm> pair_rules_;  // indexed (i-1)n + j-1, set for i >= j

  mutable std::recursive_mutex cache_mutex_;
  mutable std::map<Word, std::unique_ptr<IndexForm>> nf_cache_;
  mutable std::map<std::pair<Word, int>, std::unique_ptr<WedgeForm>> letter_cache_;

  IndexForm normal_form_locked(const Word& indices, WedgeReduction& stats) const;
  const WedgeForm& right_mult_letter(const Word& indices, int k) const;
};

/// Partial sums of index sequence b relative to a: a step at position r
/// (0-based) keeps every partial sum except the one ending at r, which drops.
bool measure_step_ok(const Word& before, const Word& after, int r);

/// Grade s of the quotient of the tensor algebra over the gamma+ pairs by
/// the ideal generated by the P+ component.  Elements with algebra
/// coefficients vanish iff the coefficient of every normal word does.
class SigmaQuotient {
 public:
  SigmaQuotient(int n, int grade);

  int grade() const { return grade_; }
  int dimension() const;
  /// Residual of a constant combination modulo the ideal.
  IndexForm reduce(IndexForm f) const;
  /// Residual of each algebra-word coefficient; empty iff w vanishes.
  std::map<Word, IndexForm> residual(const WedgeForm& w) const;

 private:
  int n_;
  int grade_;
  std::map<Word, IndexForm> rows_;
};

struct WedgeCheck {
  int n = 0;
  int pair_rank = 0;
  bool pair_rank_full = false;
  /// g_i ^ g_i = 0 for 2i != N+1, and a combination of g_k ^ g_l with
  /// k < l, k + l = 2i otherwise.
  bool diagonal_rules_hold = false;
  /// C^{ij} g_i ^ g_j reduces to zero.
  bool metric_relation_reduces = false;
  /// Grade 0..N+1 dimensions of the constant coefficient quotient.
  std::vector<int> graded_dimensions;
  bool top_grade_empty = false;
  /// d theta and d theta ^ d theta do not vanish modulo the P+ ideal.
  bool d_theta_nonzero = false;
  bool d_theta_squared_nonzero = false;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

WedgeCheck check_wedge(const WedgeCalculus& wc);

}  // namespace esq
