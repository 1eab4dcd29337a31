#include "esq/first_order.hpp"

#include "esq/error.hpp"

namespace esq {

std::string to_string(Sign s) { return s == Sign::plus ? "plus" : "minus"; }

std::string to_string(Basis b) {
  switch (b) {
    case Basis::dx:
      return "dx";
    case Basis::gamma_plus:
      return "gamma+";
    case Basis::gamma_minus:
      return "gamma-";
  }
  return "";
}

std::string basis_symbol(Basis b) {
  switch (b) {
    case Basis::dx:
      return "dx";
    case Basis::gamma_plus:
      return "g+";
    case Basis::gamma_minus:
      return "g-";
  }
  return "";
}

std::string to_string(const Form<Scalar>& f, Basis basis) {
  std::vector<std::pair<Scalar, std::string>> terms;
  const std::string sym = basis_symbol(basis);
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    std::string body = it->first.word.empty() ? "" : it->first.word.to_string() + "*";
    body += sym + "_" + std::to_string(it->first.index);
    terms.emplace_back(it->second, body);
  }
  return format_sum(terms);
}

std::string to_string(const OneForm& f) { return to_string(f.terms, f.basis); }

std::string to_string(const RightForm& f) {
  std::vector<std::pair<Scalar, std::string>> terms;
  for (auto it = f.terms.terms().rbegin(); it != f.terms.terms().rend(); ++it) {
    std::string body = "dx_" + std::to_string(it->first.index);
    if (!it->first.word.empty()) body += "*" + it->first.word.to_string();
    terms.emplace_back(it->second, body);
  }
  return format_sum(terms);
}

namespace {

Scalar sign_factor(Sign s) { return s == Sign::plus ? Scalar(1L) : Scalar(-1L); }

// 1 - e q^k with e = +1 for plus and -1 for minus.
Scalar one_mp(Sign s, int k) { return Scalar(1L) - sign_factor(s) * Scalar::q_power(k); }

}  // namespace

std::array<Scalar, 4> calculus_coefficients(Sign sign, int n) {
  check_dimension(n);
  const Scalar q = Scalar::q();
  const Scalar e = sign_factor(sign);
  const Scalar one_qn2 = Scalar(1L) + Scalar::q_power(n - 2);
  const Scalar den = one_mp(sign, n - 1);
  return {e, e * q - Scalar(1L), (Scalar::q_power(n) - Scalar::q_power(n - 2)) / den,
          one_mp(sign, 1) * one_qn2 / den};
}

Scalar alpha_value(Sign calculus, Basis basis, int n) {
  check_dimension(n);
  const Scalar one_qn2 = Scalar(1L) + Scalar::q_power(n - 2);
  const Scalar den = one_mp(calculus, n - 1);
  switch (basis) {
    case Basis::gamma_plus:
      return -one_qn2 / den;
    case Basis::gamma_minus:
      return sign_factor(calculus) * Scalar::q() * one_qn2 / den;
    case Basis::dx:
      break;
  }
  throw InvalidParameter("the dx basis has no alpha");
}

FirstOrderCalculus::FirstOrderCalculus(const SphereAlgebra& algebra, Sign sign)
    : x_(algebra),
      sign_(sign),
      a_(calculus_coefficients(sign, algebra.dimension())),
      gamma_inverse_(algebra.dimension()) {
  const int n = dimension();
  const StructureTensors& st = x_.tensors();
  dx_rules_ = ansatz_rules<Scalar>(x_, a_[0], a_[1], a_[2], a_[3]);

  right_rules_.assign(static_cast<std::size_t>(n * n), {});
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      Form<Scalar>& r = right_rules_[static_cast<std::size_t>((i - 1) * n + (j - 1))];
      for (const auto& e : st.Rinv.column(i, j)) r.add(FormKey{Word::letter(e.l), e.k}, a_[0] * e.value);
      r.add(FormKey{Word::letter(j), i}, a_[1]);
      for (const auto& e : st.K.column(i, j)) r.add(FormKey{Word::letter(e.l), e.k}, a_[2] * e.value);
      for (int k = 1; k <= n; ++k) {
        const int l = prime(k, n);
        for (const auto& [v, cv] : x_.normal_form(Word::from_letters({l, i, j})))
          r.add(FormKey{v, k}, a_[3] * st.C.row_entry(k) * cv);
      }
    }

  build_conversions();
  gamma_plus_rules_ = derive_gamma_rules(Basis::gamma_plus);
  gamma_minus_rules_ = derive_gamma_rules(Basis::gamma_minus);
  build_gamma_right();
}

void FirstOrderCalculus::build_gamma_right() {
  const int n = dimension();
  FourTensor a(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (const auto& t : gamma_plus_rules_.at(i, j)) {
        if (t.word.length() != 1) throw Error("gamma+ commutation rules are not linear");
        a.set(t.word.first(), t.index, i, j, t.coeff);
      }
  // The rule matrix is +-Rhat, so its inverse is +-Rhat^{-1}.
  gamma_inverse_ = x_.tensors().Rinv.scaled(sign_factor(sign_));
  if (gamma_inverse_.compose(a) != FourTensor::identity(n)) throw Error("gamma+ rule matrix is not +-Rhat");
  gamma_right_.assign(static_cast<std::size_t>(n + 1), {});
  for (int i = 1; i <= n; ++i)
    for (const auto& [key, c] : conversions_.at({Basis::gamma_plus, Basis::dx})[static_cast<std::size_t>(i)])
      gamma_right_[static_cast<std::size_t>(i)].add_scaled(right_expansion(key), c);
}

Scalar FirstOrderCalculus::alpha(Basis basis) const { return alpha_value(sign_, basis, dimension()); }

void FirstOrderCalculus::build_conversions() {
  const int n = dimension();
  const StructureTensors& st = x_.tensors();
  for (Basis g : {Basis::gamma_plus, Basis::gamma_minus}) {
    const Scalar a = alpha(g);
    if ((a + Scalar(1L)).is_zero()) throw InvalidParameter("alpha = -1 gives no basis");
    const Scalar beta = a / (a + Scalar(1L));
    std::vector<Form<Scalar>> to_dx(static_cast<std::size_t>(n + 1));
    std::vector<Form<Scalar>> from_dx(static_cast<std::size_t>(n + 1));
    for (int i = 1; i <= n; ++i) {
      // x_i C^{kl} x_k beta_l
      Form<Scalar> xt;
      for (int k = 1; k <= n; ++k)
        for (const auto& [v, cv] : x_.normal_word_product(Word::letter(i), Word::letter(k)))
          xt.add(FormKey{v, prime(k, n)}, st.C.row_entry(k) * cv);
      to_dx[static_cast<std::size_t>(i)] = Form<Scalar>(FormKey{Word(), i}, Scalar(1L)) + xt * a;
      from_dx[static_cast<std::size_t>(i)] = Form<Scalar>(FormKey{Word(), i}, Scalar(1L)) - xt * beta;
    }
    conversions_[{g, Basis::dx}] = std::move(to_dx);
    conversions_[{Basis::dx, g}] = std::move(from_dx);
  }
}

Form<Scalar> FirstOrderCalculus::convert_terms(const Form<Scalar>& f, Basis from, Basis to) const {
  if (from == to) return f;
  if (from != Basis::dx && to != Basis::dx) return convert_terms(convert_terms(f, from, Basis::dx), Basis::dx, to);
  const auto& table = conversions_.at({from, to});
  Form<Scalar> out;
  for (const auto& [key, c] : f)
    for (const auto& [k2, c2] : table[static_cast<std::size_t>(key.index)])
      for (const auto& [v, cv] : x_.normal_word_product(key.word, k2.word)) out.add(FormKey{v, k2.index}, c * c2 * cv);
  return out;
}

BimoduleRules<Scalar> FirstOrderCalculus::derive_gamma_rules(Basis basis) const {
  const int n = dimension();
  BimoduleRules<Scalar> rules(n);
  for (int i = 1; i <= n; ++i) {
    const Form<Scalar>& gi = conversions_.at({basis, Basis::dx})[static_cast<std::size_t>(i)];
    for (int j = 1; j <= n; ++j)
      rules.set(i, j, convert_terms(esq::right_mult_letter(x_, dx_rules_, gi, j), Basis::dx, basis));
  }
  return rules;
}

const BimoduleRules<Scalar>& FirstOrderCalculus::rules(Basis basis) const {
  switch (basis) {
    case Basis::gamma_plus:
      return gamma_plus_rules_;
    case Basis::gamma_minus:
      return gamma_minus_rules_;
    case Basis::dx:
      break;
  }
  return dx_rules_;
}

OneForm FirstOrderCalculus::basis_form(Basis basis, int i) const {
  if (i < 1 || i > dimension()) throw IndexOutOfRange(i, dimension());
  return OneForm{basis, sign_, Form<Scalar>(FormKey{Word(), i}, Scalar(1L))};
}

OneForm FirstOrderCalculus::theta() const {
  const int n = dimension();
  OneForm t = zero();
  for (int k = 1; k <= n; ++k) t.terms.add(FormKey{Word::letter(k), prime(k, n)}, x_.tensors().C.row_entry(k));
  return t;
}

OneForm FirstOrderCalculus::right_mult(const OneForm& f, const AlgebraElement& a) const {
  const AlgebraElement b = x_.normal_form(a);
  if (f.basis != Basis::dx || degree(b) < 2) return OneForm{f.basis, sign_, esq::right_mult(x_, rules(f.basis), f.terms, b)};
  const Form<Scalar> g = convert_terms(f.terms, Basis::dx, Basis::gamma_plus);
  return OneForm{f.basis, sign_,
                 convert_terms(esq::right_mult(x_, gamma_plus_rules_, g, b), Basis::gamma_plus, Basis::dx)};
}

OneForm FirstOrderCalculus::right_mult_direct(const OneForm& f, const AlgebraElement& a) const {
  return OneForm{f.basis, sign_, esq::right_mult(x_, rules(f.basis), f.terms, x_.normal_form(a))};
}

OneForm FirstOrderCalculus::right_mult_letter(const OneForm& f, int j) const {
  if (j < 1 || j > dimension()) throw IndexOutOfRange(j, dimension());
  return OneForm{f.basis, sign_, esq::right_mult_letter(x_, rules(f.basis), f.terms, j)};
}

OneForm FirstOrderCalculus::left_mult(const AlgebraElement& a, const OneForm& f) const {
  return OneForm{f.basis, sign_, esq::left_mult(x_, x_.normal_form(a), f.terms)};
}

OneForm FirstOrderCalculus::convert(const OneForm& f, Basis target) const {
  return OneForm{target, sign_, convert_terms(f.terms, f.basis, target)};
}

const Form<Scalar>& FirstOrderCalculus::word_derivative(const Word& w) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = derivative_cache_.find(w);
    if (it != derivative_cache_.end()) return *it->second;
  }
  Form<Scalar> d;
  if (!w.empty()) {
    const Word u = w.drop_last();
    const int a = w.last();
    d = esq::right_mult_letter(x_, dx_rules_, word_derivative(u), a);
    d.add(FormKey{u, a}, Scalar(1L));
  }
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto [it, inserted] = derivative_cache_.try_emplace(w, nullptr);
  if (inserted) it->second = std::make_unique<Form<Scalar>>(std::move(d));
  return *it->second;
}

OneForm FirstOrderCalculus::differentiate(const AlgebraElement& a) const {
  OneForm out = zero();
  for (const auto& [w, c] : x_.normal_form(a)) out.terms.add_scaled(word_derivative(w), c);
  return out;
}

OneForm FirstOrderCalculus::star(const OneForm& f) const {
  const int n = dimension();
  const Form<Scalar> dx = convert_terms(f.terms, f.basis, Basis::dx);
  Form<Scalar> out;
  for (const auto& [key, c] : dx) {
    const int ip = prime(key.index, n);
    const Form<Scalar> base(FormKey{Word(), ip}, c * x_.tensors().C.row_entry(key.index));
    out += right_mult(OneForm{Basis::dx, sign_, base}, x_.star(monomial(key.word))).terms;
  }
  return OneForm{f.basis, sign_, convert_terms(out, Basis::dx, f.basis)};
}

const Form<Scalar>& FirstOrderCalculus::right_expansion(const FormKey& key) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = right_cache_.find(key);
    if (it != right_cache_.end()) return *it->second;
  }
  const int n = dimension();
  Form<Scalar> r;
  if (key.word.empty()) {
    r.add(FormKey{Word(), key.index}, Scalar(1L));
  } else {
    const Word u = key.word.drop_last();
    const int i = key.word.last();
    for (const auto& [t, c] : right_rules_[static_cast<std::size_t>((i - 1) * n + (key.index - 1))])
      for (const auto& [inner, ci] : right_expansion(FormKey{u, t.index}))
        for (const auto& [v, cv] : x_.normal_word_product(inner.word, t.word))
          r.add(FormKey{v, inner.index}, c * ci * cv);
  }
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto [it, inserted] = right_cache_.try_emplace(key, nullptr);
  if (inserted) it->second = std::make_unique<Form<Scalar>>(std::move(r));
  return *it->second;
}

RightForm FirstOrderCalculus::to_right_module(const OneForm& f) const {
  // Move the words to the right through g+ (degree preserving), then expand each g+_k.
  Form<Scalar> moved;
  for (const auto& [key, c] : convert_terms(f.terms, f.basis, Basis::gamma_plus)) {
    Form<Scalar> cur(FormKey{Word(), key.index}, c);
    for (int p = key.word.length() - 1; p >= 0; --p) {
      const int a = key.word.at(p);
      Form<Scalar> next;
      for (const auto& [rk, rc] : cur)
        for (const auto& e : gamma_inverse_.column(a, rk.index))
          for (const auto& [v, cv] : x_.normal_word_product(Word::letter(e.l), rk.word))
            next.add(FormKey{v, e.k}, rc * e.value * cv);
      cur = std::move(next);
    }
    moved += cur;
  }
  RightForm out{sign_, {}};
  for (const auto& [key, c] : moved)
    for (const auto& [rk, rc] : gamma_right_[static_cast<std::size_t>(key.index)])
      for (const auto& [v, cv] : x_.normal_word_product(rk.word, key.word)) out.terms.add(FormKey{v, rk.index}, c * rc * cv);
  return out;
}

OneForm FirstOrderCalculus::to_left_module(const RightForm& f) const {
  OneForm out = zero();
  for (const auto& [key, c] : f.terms) {
    const Form<Scalar> base(FormKey{Word(), key.index}, c);
    out.terms += right_mult(OneForm{Basis::dx, sign_, base}, monomial(key.word)).terms;
  }
  return out;
}

Scalar FirstOrderCalculus::theta_commutator_coefficient() const {
  const int n = dimension();
  return sign_factor(sign_) * Scalar::q_power(-1) * one_mp(sign_, 1) * one_mp(sign_, n - 1) /
         (Scalar(1L) + Scalar::q_power(n - 2));
}

Scalar FirstOrderCalculus::theta_prime_factor() const {
  const int n = dimension();
  return sign_factor(sign_) * Scalar::q() * (Scalar(1L) + Scalar::q_power(n - 2)) /
         (one_mp(sign_, 1) * one_mp(sign_, n - 1));
}

}  // namespace esq
