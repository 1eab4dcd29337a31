#pragma once

// Second order structure over the calculus Gamma+: the tensor square
// Gamma (x)_X Gamma as a free left module on basis pairs, the braiding sigma,
// and the second order relations of the universal calculus.

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "esq/first_order.hpp"

namespace esq {

using PairForm = LinComb<PairKey>;

struct TwoTensor {
  Basis basis = Basis::dx;
  PairForm terms;

  bool operator==(const TwoTensor& o) const { return basis == o.basis && terms == o.terms; }
  bool operator!=(const TwoTensor& o) const { return !(*this == o); }
  bool is_zero() const { return terms.is_zero(); }
  TwoTensor& operator+=(const TwoTensor& o);
  TwoTensor& operator-=(const TwoTensor& o);
  TwoTensor& operator*=(const Scalar& c);
};

TwoTensor operator+(TwoTensor a, const TwoTensor& b);
TwoTensor operator-(TwoTensor a, const TwoTensor& b);
TwoTensor operator*(const Scalar& c, TwoTensor a);

/// "c*x_1*dx_2(x)dx_3 + ..." text, leading terms first.
std::string to_string(const TwoTensor& t);

class TensorCalculus {
 public:
  /// The calculus must be Gamma+.
  explicit TensorCalculus(const FirstOrderCalculus& gamma);

  const FirstOrderCalculus& first_order() const { return g_; }
  const SphereAlgebra& algebra() const { return g_.algebra(); }
  int dimension() const { return g_.dimension(); }

  TwoTensor zero(Basis basis = Basis::dx) const { return TwoTensor{basis, {}}; }
  TwoTensor basis_pair(Basis basis, int i, int j) const;
  /// a (x)_X b; b is converted to a's basis first.
  TwoTensor tensor(const OneForm& a, const OneForm& b) const;

  TwoTensor left_mult(const AlgebraElement& a, const TwoTensor& t) const;
  /// Products by words are taken in the gamma+ basis and converted back.
  TwoTensor right_mult(const TwoTensor& t, const AlgebraElement& a) const;
  /// Letter-by-letter right action in t's own basis.
  TwoTensor right_mult_direct(const TwoTensor& t, const AlgebraElement& a) const;
  TwoTensor convert(const TwoTensor& t, Basis target) const;

  /// sigma(g_i (x) g_j) = alpha Rinv^{kl}_{ij} g_k (x) g_l with g the given gamma
  /// basis; the result is returned in t's basis.
  TwoTensor sigma(const TwoTensor& t, const Scalar& alpha, Basis gamma = Basis::gamma_plus) const;
  /// sigma^{-1}(g_i (x) g_j) = alpha^{-1} Rhat^{kl}_{ij} g_k (x) g_l.
  TwoTensor sigma_inverse(const TwoTensor& t, const Scalar& alpha, Basis gamma = Basis::gamma_plus) const;
  /// Left-linear map g_i (x) g_j -> sum A^{kl}_{ij} g_k (x) g_l in the given gamma basis.
  TwoTensor apply_pair_map(const TwoTensor& t, const FourTensor& a, Basis gamma) const;

  /// d(x)theta = C^{ij} dx_i (x) dx_j.
  TwoTensor d_theta() const;
  /// C^{mn} x_m dx_n (x) dx_l, i.e. theta (x) dx_l.
  TwoTensor theta_dx(int l) const;

 private:
  const FirstOrderCalculus& g_;
  // Basis pairs converted between bases, keyed by (from, to).
  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<Basis, Basis>, std::vector<PairForm>> pair_conversions_;
  // gamma+ pair times a letter, indexed ((i-1)n + j-1)n + k-1.
  std::vector<PairForm> gamma_pair_letter_;

  const std::vector<PairForm>& pair_conversion(Basis from, Basis to) const;
  PairForm right_mult_letter(const PairForm& t, Basis basis, int k) const;
};

/// Leibniz derivative of the bimodule rule for dx_i * x_j:
/// D_ij = -dx_i (x) dx_j - sum c d(w) (x) dx_l.
TwoTensor leibniz_relation(const TensorCalculus& tc, int i, int j);

/// The relation obtained by differentiating the bimodule rule, as printed
/// term by term before simplification.
TwoTensor leibniz_display(const TensorCalculus& tc, int i, int j);

/// The simplified relation [R_ij].  `flip_tail` negates every term after
/// R^{-1} dx (x) dx + q dx_i (x) dx_j; only that variant is a consequence of
/// the Leibniz relations.
TwoTensor relation_r(const TensorCalculus& tc, int i, int j, bool flip_tail = false);
/// [I]_ij and [II].  `flip_theta` negates every term containing theta.
TwoTensor relation_i(const TensorCalculus& tc, int i, int j, bool flip_theta = false);
TwoTensor relation_ii(const TensorCalculus& tc);
/// [II] in the gamma- basis as predicted in closed form.
TwoTensor relation_ii_gamma_display(const TensorCalculus& tc);

/// T = 2q(1+q^{N-2})/((1-q)(1-q^{N-1})).
Scalar second_order_t(int n);
/// A7 = 2q^{N-3}(1-q)^4(1+q)^2(1+q^{N-2})/(1-q^{N-1})^2.
Scalar predicted_a7(int n);
/// A1..A8 from the closed forms of A5, A6, A7, A8 = A7/q and the ratio T.
std::array<Scalar, 8> predicted_a(int n);

/// Span of left multiples u * g for normal words u up to a degree.
class TensorSpan {
 public:
  void insert(PairForm row);
  PairForm reduce(PairForm f) const;
  bool contains(const PairForm& f) const { return reduce(f).is_zero(); }
  std::size_t rank() const { return rows_.size(); }

 private:
  std::map<PairKey, PairForm> rows_;
};

struct SecondOrderRelations {
  int n = 0;
  /// The Leibniz relations agree with the printed expansion (up to sign).
  bool leibniz_matches_display = false;
  /// [R_ij] with flipped tail lies in the left span of the Leibniz relations.
  bool r_in_leibniz_span = false;
  /// The same for [R_ij] with its tail as printed.
  bool r_printed_in_leibniz_span = false;
  int leibniz_span_degree = 0;
  /// C^{ij}[R_ij] = lambda [II] with lambda = -(1-q)^2(1+q^{N-2}).
  bool contraction_gives_ii = false;
  /// [I] - [R] lies in the left span of [II].
  bool i_matches_r = false;

  /// [R_ij] x_k = sum A_m E_m modulo left multiples of the P+ part of [R],
  /// solved for A at the smallest multiplier degree where the closed form
  /// values fit.  The solution space is affine; its direction count is
  /// `solution_dimension`.
  int reduction_degree = 0;
  bool system_consistent = false;
  int solution_dimension = 0;
  /// A_{m+4} = T A_m for every solution.
  bool ratios_forced = false;
  /// The closed form values are a solution.
  bool predicted_consistent = false;
  /// Closed form A1..A8; A7 = q A8 holds by construction.
  std::array<Scalar, 8> A;
  Scalar T;
  /// C^{ij}(A1 x_i x_j x_k + A2 C_ij x_k + A3 C_jk x_i + A4 C_tk Rinv^{st}_{ij} x_s) = S x_k.
  Scalar S;
  bool s_nonzero = false;
  /// sum A_m E_m = (A1 x_i x_j x_k + ...) [II] for all i, j, k.
  bool factorization_holds = false;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

/// Builds the relations and checks A1..A8, T, S.  Expensive beyond N = 4.
SecondOrderRelations build_second_order_relations(const TensorCalculus& tc, int max_degree = 6);

/// (id - sigma) kills [I] and [II] (with the given alpha).
bool annihilation_check(const TensorCalculus& tc, const Scalar& alpha, bool flip_theta = false);

/// sigma defined via gamma+ and via gamma- agree on every gamma+ basis pair,
/// and likewise sigma^{-1}.
bool sigma_basis_independence_check(const TensorCalculus& tc, const Scalar& alpha);

/// sigma(t * x_k) = sigma(t) * x_k on every basis pair, in the given gamma basis.
bool sigma_bimodule_check(const TensorCalculus& tc, const Scalar& alpha, Basis gamma);

/// Braid relation for sigma on triple basis tensors; sigma acts by alpha Rinv.
bool braid_check(const Scalar& alpha, int n);

}  // namespace esq
