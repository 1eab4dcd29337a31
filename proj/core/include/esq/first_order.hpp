#pragma once

// First order differential calculi on the sphere algebra.
//
// One-forms are kept as free left-module expressions sum (word) * beta_i in
// one of three bases: dx, gamma+ or gamma-.  Right multiplication by a
// generator is driven by a table of bimodule rules beta_i * x_j = sum c w
// beta_l; the rules are templated on the coefficient type so that the
// classification engine can run them with unknown coefficients.

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "esq/multipoly.hpp"
#include "esq/sphere_algebra.hpp"

namespace esq {

enum class Sign { plus, minus };
enum class Basis { dx, gamma_plus, gamma_minus };

std::string to_string(Sign s);
std::string to_string(Basis b);
/// Symbol used when printing a basis one-form: "dx", "g+" or "g-".
std::string basis_symbol(Basis b);

template <class C>
using Form = LinComb<FormKey, C>;

template <class C>
struct RuleTerm {
  Word word;
  int index;
  C coeff;
};

/// beta_i * x_j = sum coeff * word * beta_index.
template <class C>
class BimoduleRules {
 public:
  BimoduleRules() = default;
  explicit BimoduleRules(int n) : n_(n), table_(static_cast<std::size_t>(n * n)) {}

  int dimension() const { return n_; }
  const std::vector<RuleTerm<C>>& at(int i, int j) const { return table_[slot(i, j)]; }
  void set(int i, int j, const Form<C>& rhs) {
    auto& terms = table_[slot(i, j)];
    terms.clear();
    for (const auto& [key, c] : rhs) terms.push_back(RuleTerm<C>{key.word, key.index, c});
  }
  Form<C> as_form(int i, int j) const {
    Form<C> f;
    for (const auto& t : at(i, j)) f.add(FormKey{t.word, t.index}, t.coeff);
    return f;
  }

 private:
  int n_ = 0;
  std::vector<std::vector<RuleTerm<C>>> table_;
  std::size_t slot(int i, int j) const { return static_cast<std::size_t>((i - 1) * n_ + (j - 1)); }
};

template <class C>
Form<C> right_mult_letter(const SphereAlgebra& x, const BimoduleRules<C>& rules, const Form<C>& f, int j) {
  Form<C> out;
  for (const auto& [key, c] : f)
    for (const auto& t : rules.at(key.index, j)) {
      const C ct = c * t.coeff;
      for (const auto& [v, cv] : x.normal_word_product(key.word, t.word)) out.add(FormKey{v, t.index}, ct * cv);
    }
  return out;
}

template <class C>
Form<C> right_mult_word(const SphereAlgebra& x, const BimoduleRules<C>& rules, Form<C> f, const Word& w) {
  for (int p = 0; p < w.length(); ++p) f = right_mult_letter(x, rules, f, w.at(p));
  return f;
}

template <class C>
Form<C> right_mult(const SphereAlgebra& x, const BimoduleRules<C>& rules, const Form<C>& f, const AlgebraElement& a) {
  Form<C> out;
  for (const auto& [w, c] : a) out.add_scaled(right_mult_word(x, rules, f, w), c);
  return out;
}

template <class C>
Form<C> left_mult(const SphereAlgebra& x, const AlgebraElement& a, const Form<C>& f) {
  Form<C> out;
  for (const auto& [u, cu] : a)
    for (const auto& [key, c] : f)
      for (const auto& [v, cv] : x.normal_word_product(u, key.word)) out.add(FormKey{v, key.index}, c * (cu * cv));
  return out;
}

/// dx_i * x_j = a1 Rinv^{kl}_{ij} x_k dx_l + a2 x_i dx_j + a3 K^{kl}_{ij} x_k dx_l
///              + a4 C^{kl} x_i x_j x_k dx_l
template <class C>
BimoduleRules<C> ansatz_rules(const SphereAlgebra& x, const C& a1, const C& a2, const C& a3, const C& a4) {
  const int n = x.dimension();
  const StructureTensors& st = x.tensors();
  BimoduleRules<C> rules(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      Form<C> rhs;
      for (const auto& e : st.Rinv.column(i, j)) rhs.add(FormKey{Word::letter(e.k), e.l}, a1 * e.value);
      rhs.add(FormKey{Word::letter(i), j}, a2);
      for (const auto& e : st.K.column(i, j)) rhs.add(FormKey{Word::letter(e.k), e.l}, a3 * e.value);
      if (!a4.is_zero()) {
        for (int k = 1; k <= n; ++k) {
          const int l = prime(k, n);
          const AlgebraElement w = x.normal_form(Word::from_letters({i, j, k}));
          for (const auto& [v, cv] : w) rhs.add(FormKey{v, l}, a4 * (st.C.row_entry(k) * cv));
        }
      }
      rules.set(i, j, rhs);
    }
  return rules;
}

/// "c*x_1*x_2*dx_3 + ..." text, leading terms first.
std::string to_string(const Form<Scalar>& f, Basis basis);

/// The bimodule coefficients (a1, a2, a3, a4) of the calculus with the given sign.
std::array<Scalar, 4> calculus_coefficients(Sign sign, int n);

/// alpha values of the gamma+ and gamma- bases for the calculus with the given sign.
Scalar alpha_value(Sign calculus, Basis basis, int n);

struct OneForm {
  Basis basis = Basis::dx;
  Sign sign = Sign::plus;
  Form<Scalar> terms;

  bool operator==(const OneForm& o) const { return basis == o.basis && sign == o.sign && terms == o.terms; }
  bool operator!=(const OneForm& o) const { return !(*this == o); }
  bool is_zero() const { return terms.is_zero(); }
};

std::string to_string(const OneForm& f);

/// Right-module expression sum beta_i * (word); keys hold (word, i).
struct RightForm {
  Sign sign = Sign::plus;
  Form<Scalar> terms;
  bool operator==(const RightForm& o) const { return sign == o.sign && terms == o.terms; }
};

std::string to_string(const RightForm& f);

class FirstOrderCalculus {
 public:
  FirstOrderCalculus(const SphereAlgebra& algebra, Sign sign);

  const SphereAlgebra& algebra() const { return x_; }
  int dimension() const { return x_.dimension(); }
  Sign sign() const { return sign_; }
  const std::array<Scalar, 4>& coefficients() const { return a_; }
  Scalar alpha(Basis basis) const;

  /// Bimodule rules in the requested basis.  The gamma rules are derived by
  /// conjugating the dx rules with the change of basis.
  const BimoduleRules<Scalar>& rules(Basis basis) const;

  OneForm zero(Basis basis = Basis::dx) const { return OneForm{basis, sign_, {}}; }
  OneForm basis_form(Basis basis, int i) const;
  OneForm theta() const;

  /// Products by words of length two or more are taken in the gamma+ basis,
  /// where the rules do not raise the degree, and converted back.
  OneForm right_mult(const OneForm& f, const AlgebraElement& a) const;
  /// Letter-by-letter application of the rules of f's own basis.
  OneForm right_mult_direct(const OneForm& f, const AlgebraElement& a) const;
  OneForm right_mult_letter(const OneForm& f, int j) const;
  OneForm left_mult(const AlgebraElement& a, const OneForm& f) const;
  OneForm convert(const OneForm& f, Basis target) const;

  /// Leibniz extension of x_i -> dx_i; the argument is brought to normal form first.
  OneForm differentiate(const AlgebraElement& a) const;

  /// Conjugate-linear, antimultiplicative: (x dy)* = d(y*) x*.
  OneForm star(const OneForm& f) const;

  RightForm to_right_module(const OneForm& f) const;
  OneForm to_left_module(const RightForm& f) const;

  /// Coefficient of dx_i in theta x_i - x_i theta, as predicted in closed form.
  Scalar theta_commutator_coefficient() const;
  /// theta' = factor * theta satisfies dx = theta' x - x theta'.
  Scalar theta_prime_factor() const;

 private:
  const SphereAlgebra& x_;
  Sign sign_;
  std::array<Scalar, 4> a_;
  BimoduleRules<Scalar> dx_rules_;
  BimoduleRules<Scalar> gamma_plus_rules_;
  BimoduleRules<Scalar> gamma_minus_rules_;
  // beta_i of one basis written in another basis, indexed [from][to][i].
  std::map<std::pair<Basis, Basis>, std::vector<Form<Scalar>>> conversions_;
  // x_i dx_j as a right-module expression.
  std::vector<Form<Scalar>> right_rules_;
  // x_k g+_l = sum inverse^{ij}_{kl} g+_i * x_j, and g+_i as a right-module expression.
  FourTensor gamma_inverse_;
  std::vector<Form<Scalar>> gamma_right_;

  mutable std::mutex cache_mutex_;
  mutable std::map<Word, std::unique_ptr<Form<Scalar>>> derivative_cache_;
  mutable std::map<FormKey, std::unique_ptr<Form<Scalar>>> right_cache_;

  const Form<Scalar>& word_derivative(const Word& w) const;
  const Form<Scalar>& right_expansion(const FormKey& key) const;
  void build_gamma_right();
  Form<Scalar> convert_terms(const Form<Scalar>& f, Basis from, Basis to) const;
  void build_conversions();
  BimoduleRules<Scalar> derive_gamma_rules(Basis basis) const;
};

}  // namespace esq
