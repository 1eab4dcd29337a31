#include "esq/classification.hpp"

#include <algorithm>

#include "esq/error.hpp"

namespace esq {

namespace {

constexpr int kA1 = 0;
constexpr int kA2 = 1;
constexpr int kA3 = 2;
constexpr int kA4 = 3;

template <class C>
Form<C> basis_one(int i) {
  return Form<C>(FormKey{Word(), i}, C(Scalar(1L)));
}

template <class C>
bool forms_zero(const std::vector<Form<C>>& v) {
  return std::all_of(v.begin(), v.end(), [](const Form<C>& f) { return f.is_zero(); });
}

}  // namespace

template <class C>
bool ConditionForms<C>::all_zero() const {
  return forms_zero(sphere_derivative) && forms_zero(relation_derivative) && forms_zero(sphere_action) && forms_zero(relation_action);
}

template <class C>
ConditionForms<C> build_conditions(const SphereAlgebra& x, const BimoduleRules<C>& rules) {
  const int n = x.dimension();
  const StructureTensors& st = x.tensors();
  ConditionForms<C> out;

  // dx_i * x_s and dx_i * x_s * x_t
  std::vector<Form<C>> q1(static_cast<std::size_t>(n * n));
  std::vector<Form<C>> q2(static_cast<std::size_t>(n * n * n));
  auto q1_at = [&](int i, int s) -> Form<C>& { return q1[static_cast<std::size_t>((i - 1) * n + (s - 1))]; };
  auto q2_at = [&](int i, int s, int t) -> Form<C>& {
    return q2[static_cast<std::size_t>(((i - 1) * n + (s - 1)) * n + (t - 1))];
  };
  for (int i = 1; i <= n; ++i)
    for (int s = 1; s <= n; ++s) q1_at(i, s) = right_mult_letter(x, rules, basis_one<C>(i), s);
  for (int i = 1; i <= n; ++i)
    for (int s = 1; s <= n; ++s)
      for (int t = 1; t <= n; ++t) q2_at(i, s, t) = right_mult_letter(x, rules, q1_at(i, s), t);

  // d(x_k x_l) = dx_k * x_l + x_k dx_l
  auto d_pair = [&](int k, int l) {
    Form<C> f = q1_at(k, l);
    f.add(FormKey{Word::letter(k), l}, C(Scalar(1L)));
    return f;
  };

  Form<C> sphere_derivative;
  for (int i = 1; i <= n; ++i) sphere_derivative += d_pair(i, prime(i, n)) * st.C.row_entry(i);
  out.sphere_derivative.push_back(std::move(sphere_derivative));

  const Scalar qinv = Scalar::q_power(-1);
  const Scalar c = (Scalar::q_power(n - 1) - Scalar::q_power(n - 3)) / (Scalar(1L) + Scalar::q_power(n - 2));
  const FourTensor m = st.Rinv - st.I.scaled(qinv) - st.K.scaled(c);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      Form<C> f;
      for (const auto& e : m.column(i, j)) f += d_pair(e.k, e.l) * e.value;
      out.relation_derivative.push_back(std::move(f));
    }

  for (int i = 1; i <= n; ++i) {
    Form<C> f = -basis_one<C>(i);
    for (int k = 1; k <= n; ++k) f += q2_at(i, k, prime(k, n)) * st.C.row_entry(k);
    out.sphere_action.push_back(std::move(f));
  }

  const Scalar q = Scalar::q();
  const Scalar c4 = (q - qinv) / (Scalar(1L) + Scalar::q_power(n - 2));
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= n; ++k)
      for (int l = 1; l <= n; ++l) {
        Form<C> f = q2_at(i, k, l) * (-q);
        for (const auto& e : st.R.column(k, l)) f += q2_at(i, e.k, e.l) * e.value;
        if (l == prime(k, n)) f += basis_one<C>(i) * (c4 * st.C.row_entry(k));
        out.relation_action.push_back(std::move(f));
      }
  return out;
}

template struct ConditionForms<Scalar>;
template struct ConditionForms<MultiPoly>;
template ConditionForms<Scalar> build_conditions(const SphereAlgebra&, const BimoduleRules<Scalar>&);
template ConditionForms<MultiPoly> build_conditions(const SphereAlgebra&, const BimoduleRules<MultiPoly>&);

PolySpan::PolySpan(Rank rank) : rank_(std::move(rank)) {}

bool PolySpan::greater(const MultiPoly::Monomial& a, const MultiPoly::Monomial& b) const {
  const auto ra = rank_(a);
  const auto rb = rank_(b);
  if (ra != rb) return ra > rb;
  return a > b;
}

MultiPoly::Monomial PolySpan::leading(const MultiPoly& p) const {
  MultiPoly::Monomial best{};
  bool first = true;
  for (const auto& [m, c] : p.terms())
    if (first || greater(m, best)) {
      best = m;
      first = false;
    }
  return best;
}

MultiPoly PolySpan::reduce(MultiPoly p) const {
  bool changed = true;
  while (changed && !p.is_zero()) {
    changed = false;
    // Eliminate the highest pivot monomial present; lower ones follow.
    const std::pair<MultiPoly::Monomial, MultiPoly>* best = nullptr;
    for (const auto& row : rows_)
      if (!p.coefficient(row.first).is_zero() && (best == nullptr || greater(row.first, best->first))) best = &row;
    if (best != nullptr) {
      p -= best->second * p.coefficient(best->first);
      changed = true;
    }
  }
  return p;
}

bool PolySpan::insert(const MultiPoly& p) {
  MultiPoly r = reduce(p);
  if (r.is_zero()) return false;
  const auto lead = leading(r);
  r *= r.coefficient(lead).inverse();
  rows_.emplace_back(lead, std::move(r));
  return true;
}

std::vector<MultiPoly> PolySpan::rows() const {
  auto sorted = rows_;
  std::sort(sorted.begin(), sorted.end(), [this](const auto& a, const auto& b) { return greater(a.first, b.first); });
  // Back-substitute so that each row is free of the other pivots.
  for (std::size_t i = sorted.size(); i-- > 0;)
    for (std::size_t j = 0; j < i; ++j) {
      const Scalar c = sorted[j].second.coefficient(sorted[i].first);
      if (!c.is_zero()) sorted[j].second -= sorted[i].second * c;
    }
  std::vector<MultiPoly> out;
  for (auto& r : sorted) out.push_back(std::move(r.second));
  return out;
}

ModuleReducer::ModuleReducer(const SphereAlgebra& x, int max_degree) {
  const int n = x.dimension();
  Form<Scalar> theta;
  for (int k = 1; k <= n; ++k) theta.add(FormKey{Word::letter(k), prime(k, n)}, x.tensors().C.row_entry(k));
  for (int d = 0; d < max_degree; ++d)
    for (const Word& w : x.basis_words(d)) {
      Form<Scalar> row = left_mult(x, monomial(w), theta);
      // Reduce against existing rows, leading key first.
      while (!row.is_zero()) {
        const FormKey lead = row.terms().rbegin()->first;
        auto it = rows_.find(lead);
        if (it == rows_.end()) break;
        row.add_scaled(it->second, -row.coefficient(lead));
      }
      if (row.is_zero()) continue;
      const FormKey lead = row.terms().rbegin()->first;
      row *= row.coefficient(lead).inverse();
      rows_.emplace(lead, std::move(row));
    }
}

template <class C>
Form<C> ModuleReducer::reduce(Form<C> f) const {
  Form<C> out;
  while (!f.is_zero()) {
    const auto& [lead, c] = *f.terms().rbegin();
    const FormKey key = lead;
    const C coeff = c;
    auto it = rows_.find(key);
    if (it == rows_.end()) {
      out.add(key, coeff);
      f.erase(key);
      continue;
    }
    for (const auto& [k, v] : it->second) f.add(k, coeff * (-v));
  }
  return out;
}

template Form<Scalar> ModuleReducer::reduce(Form<Scalar>) const;
template Form<MultiPoly> ModuleReducer::reduce(Form<MultiPoly>) const;

std::string to_string(Constraint c) { return c == Constraint::free ? "free" : "theta-zero"; }

MultiPoly predicted_a4_relation(int n) {
  const Scalar q2 = Scalar::q_power(2);
  const Scalar k3 = q2 * (Scalar(1L) + Scalar::q_power(n - 2)) * (Scalar(1L) - Scalar::q_power(-n)) / (q2 - Scalar(1L));
  // a4 + 1 + q^{N-1} a1 + a2 + k3 a3 = 0
  return MultiPoly::variable(kA4) + MultiPoly(1L) + MultiPoly::variable(kA1) * Scalar::q_power(n - 1) +
         MultiPoly::variable(kA2) + MultiPoly::variable(kA3) * k3;
}

namespace {

bool is_single_variable_linear(const MultiPoly::Monomial& m, int& var) {
  int deg = 0;
  for (int v = 0; v < MultiPoly::kVariables; ++v) {
    deg += m[static_cast<std::size_t>(v)];
    if (m[static_cast<std::size_t>(v)] == 1) var = v;
  }
  return deg == 1;
}

MultiPoly substitute_all(MultiPoly p, const std::map<int, MultiPoly>& expr) {
  for (const auto& [v, e] : expr) p = p.substitute(v, e);
  return p;
}

void collect(PolySpan& span, const std::vector<Form<MultiPoly>>& forms, const ModuleReducer* reducer) {
  for (const auto& f : forms) {
    const Form<MultiPoly> g = reducer != nullptr ? reducer->reduce(f) : f;
    for (const auto& [key, p] : g) span.insert(p);
  }
}

int max_word_length(const ConditionForms<MultiPoly>& c) {
  int d = 0;
  for (const auto* family : {&c.sphere_derivative, &c.relation_derivative, &c.sphere_action, &c.relation_action})
    for (const auto& f : *family)
      for (const auto& [key, p] : f) d = std::max(d, key.word.length());
  return d;
}

// Solve the remaining conditions in a single unknown `var` after the others are fixed.
// Returns candidate values; `free_var` is set if nothing constrains it.
std::vector<Scalar> solve_single(const std::vector<MultiPoly>& polys, int var, bool& free_var, bool& inconsistent) {
  free_var = true;
  inconsistent = false;
  std::vector<Scalar> linear_roots;
  MultiPoly g;
  for (const auto& p : polys) {
    if (p.is_zero()) continue;
    free_var = false;
    g = g.is_zero() ? p : univariate_gcd(g, p, var);
  }
  if (free_var) return {};
  if (g.is_constant()) {
    inconsistent = true;
    return {};
  }
  auto roots = univariate_roots(g, var);
  if (!roots) {
    inconsistent = true;
    return {};
  }
  return *roots;
}

}  // namespace

ClassificationResult classify(Constraint constraint, int n) {
  check_dimension(n);
  ClassificationResult res;
  res.constraint = constraint;
  res.n = n;
  res.basis_complete = n >= 6;
  if (!res.basis_complete) res.notes.push_back("IncompleteBasis: the ansatz is only known to be exhaustive for N >= 6");

  SphereAlgebra x(n);
  const MultiPoly a1 = MultiPoly::variable(kA1), a2 = MultiPoly::variable(kA2), a3 = MultiPoly::variable(kA3),
                  a4 = MultiPoly::variable(kA4);
  const bool free = constraint == Constraint::free;
  const BimoduleRules<MultiPoly> rules =
      free ? ansatz_rules<MultiPoly>(x, a1, a2, a3, a4) : ansatz_rules<MultiPoly>(x, a1, a2, MultiPoly(), MultiPoly());
  const ConditionForms<MultiPoly> cond = build_conditions(x, rules);

  std::unique_ptr<ModuleReducer> reducer;
  if (!free) reducer = std::make_unique<ModuleReducer>(x, max_word_length(cond));

  // Linear span of the differentiated relations: a2 first, then a4.
  PolySpan linear([](const MultiPoly::Monomial& m) {
    return std::vector<int>{m[kA2], m[kA4], m[kA3], m[kA1]};
  });
  collect(linear, cond.sphere_derivative, reducer.get());
  collect(linear, cond.relation_derivative, reducer.get());

  PolySpan all([](const MultiPoly::Monomial& m) {
    return std::vector<int>{m[kA2] + m[kA4], m[kA3], m[0] + m[1] + m[2] + m[3], m[kA1]};
  });
  for (const auto& p : linear.rows()) all.insert(p);
  collect(all, cond.sphere_action, reducer.get());
  collect(all, cond.relation_action, reducer.get());
  res.constraints = all.rows();

  // Linear elimination of a2 and a4.
  std::map<int, MultiPoly> expr;
  auto linear_rows = linear.rows();
  std::reverse(linear_rows.begin(), linear_rows.end());
  for (const auto& row : linear_rows) {
    int var = -1;
    const auto lead = linear.leading(row);
    if (row.total_degree() <= 1 && is_single_variable_linear(lead, var) && (var == kA2 || var == kA4)) {
      res.eliminations.push_back(row);
      expr[var] = substitute_all(MultiPoly::variable(var) - row, expr);
    }
  }
  for (auto& [v, e] : expr) e = substitute_all(e, expr);
  if (expr.count(kA2)) res.a2_relation_expected = expr.at(kA2) == a1 * Scalar::q() - MultiPoly(1L);

  // Remaining conditions in a1 (and a3): eliminate a3 by row reduction,
  // multiplying through by monomials until univariate conditions appear.
  std::vector<MultiPoly> reduced;
  for (const auto& p : res.constraints) {
    MultiPoly s = substitute_all(p, expr);
    if (!s.is_zero()) reduced.push_back(std::move(s));
  }
  for (const auto& p : reduced)
    if (p.degree_in(kA2) > 0 || p.degree_in(kA4) > 0) res.underdetermined = true;

  auto rank_a3 = [](const MultiPoly::Monomial& m) {
    return std::vector<int>{m[kA2] + m[kA4], m[kA3], m[0] + m[1] + m[2] + m[3]};
  };
  PolySpan uni_span([](const MultiPoly::Monomial& m) { return std::vector<int>{m[kA1]}; });
  for (int extra = 0; extra <= 2 && uni_span.rank() == 0; ++extra) {
    PolySpan span(rank_a3);
    for (const auto& p : reduced) {
      span.insert(p);
      for (int e = 1; e <= extra; ++e)
        for (int i = 0; i <= e; ++i) {
          MultiPoly mult(1L);
          for (int r = 0; r < i; ++r) mult *= a1;
          for (int r = i; r < e; ++r) mult *= a3;
          span.insert(p * mult);
        }
    }
    for (const auto& row : span.rows())
      if (row.is_univariate_in(kA1) && !row.is_zero()) uni_span.insert(row);
  }
  res.univariate = uni_span.rows();

  MultiPoly g;
  for (const auto& p : res.univariate) g = g.is_zero() ? p : univariate_gcd(g, p, kA1);
  res.a1_polynomial = g;

  if (!free) {
    const Scalar qq = Scalar::q() + Scalar::q_power(-1);
    res.witnesses = {a1 * a1 - MultiPoly(1L), a1 * a1 - a1 * qq + MultiPoly(1L)};
    res.witnesses_found = uni_span.contains(res.witnesses[0]) && uni_span.contains(res.witnesses[1]);
  }

  std::vector<Scalar> a1_values;
  if (g.is_zero()) {
    res.underdetermined = true;
    res.notes.push_back("no condition on a1 alone");
  } else if (!g.is_constant()) {
    auto roots = univariate_roots(g, kA1);
    if (roots) {
      a1_values = *roots;
    } else {
      res.notes.push_back("a1 polynomial has no roots in Q(q^(1/2))");
    }
  }

  for (const Scalar& r1 : a1_values) {
    std::vector<MultiPoly> in_a3;
    for (const auto& p : reduced) in_a3.push_back(p.substitute(kA1, MultiPoly(r1)));
    std::vector<Scalar> a3_values{Scalar()};
    if (free) {
      bool free_a3 = false, inconsistent = false;
      a3_values = solve_single(in_a3, kA3, free_a3, inconsistent);
      if (inconsistent) continue;
      if (free_a3) {
        res.underdetermined = true;
        continue;
      }
    }
    for (const Scalar& r3 : a3_values) {
      std::array<Scalar, 4> vals{r1, Scalar(), r3, Scalar()};
      for (int v : {kA4, kA2})
        if (expr.count(v)) vals[static_cast<std::size_t>(v)] = expr.at(v).evaluate(vals);
      bool ok = true;
      for (const auto& p : res.constraints) ok = ok && p.evaluate(vals).is_zero();
      if (!ok) continue;
      if (free) {
        res.solutions.push_back({vals[0], vals[1], vals[2], vals[3]});
      } else {
        res.solutions.push_back({vals[0], vals[1]});
      }
    }
  }
  res.solvable = !res.solutions.empty();
  return res;
}

}  // namespace esq
