#include "esq/wedge.hpp"

#include <algorithm>
#include <iterator>

#include "esq/error.hpp"

namespace esq {

namespace {

Scalar one() { return Scalar(1L); }

// Span of constant combinations, rows monic in their largest key.
template <class Key>
class RowSpan {
 public:
  LinComb<Key> reduce(LinComb<Key> f) const {
    LinComb<Key> out;
    while (!f.is_zero()) {
      const auto last = std::prev(f.end());
      const Key key = last->first;
      const Scalar c = last->second;
      const auto row = rows_.find(key);
      if (row == rows_.end()) {
        out.add(key, c);
        f.erase(key);
      } else {
        f.add_scaled(row->second, -c);
      }
    }
    return out;
  }

  bool insert(const LinComb<Key>& f) {
    LinComb<Key> r = reduce(f);
    if (r.is_zero()) return false;
    const auto last = std::prev(r.end());
    const Key key = last->first;
    r *= last->second.inverse();
    rows_.emplace(key, std::move(r));
    return true;
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  std::map<Key, LinComb<Key>> rows_;
};

Word replace_pair(const Word& w, int r, int k, int l) {
  std::vector<int> letters = w.letters();
  letters[static_cast<std::size_t>(r)] = k;
  letters[static_cast<std::size_t>(r) + 1] = l;
  return Word::from_letters(letters);
}

// All index sequences of length s over 1..n.
std::vector<Word> all_sequences(int n, int s) {
  std::vector<Word> out{Word()};
  for (int p = 0; p < s; ++p) {
    std::vector<Word> next;
    next.reserve(out.size() * static_cast<std::size_t>(n));
    for (const Word& w : out)
      for (int a = 1; a <= n; ++a) next.push_back(w.append(a));
    out = std::move(next);
  }
  return out;
}

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Grade-2 relation vectors sum v_kl e_kl, one per column of the given map.
std::vector<IndexForm> pair_relations(const FourTensor& a, const Scalar& diagonal) {
  const int n = a.dimension();
  std::vector<IndexForm> out;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      IndexForm r;
      for (const auto& e : a.column(i, j)) r.add(Word::from_letters({e.k, e.l}), e.value);
      r.add(Word::from_letters({i, j}), diagonal);
      if (!r.is_zero()) out.push_back(std::move(r));
    }
  return out;
}

// Generators u r v of the ideal in grade s spanned by the grade-2 relations.
template <class F>
void for_each_generator(int n, int s, const std::vector<IndexForm>& rels, F&& f) {
  for (int p = 0; p + 2 <= s; ++p)
    for (const Word& u : all_sequences(n, p))
      for (const Word& v : all_sequences(n, s - 2 - p))
        for (const auto& r : rels) {
          IndexForm g;
          for (const auto& [w, c] : r) g.add(u.concat(w).concat(v), c);
          f(g);
        }
}

}  // namespace

std::string to_string(const WedgeForm& w) {
  std::vector<std::pair<Scalar, std::string>> terms;
  for (auto it = w.terms().rbegin(); it != w.terms().rend(); ++it) {
    std::string body = it->first.word.empty() ? "" : it->first.word.to_string();
    const Word& idx = it->first.indices;
    for (int p = 0; p < idx.length(); ++p) {
      if (p > 0) body += "^";
      else if (!body.empty()) body += "*";
      body += "g+_" + std::to_string(idx.at(p));
    }
    if (body.empty()) body = "1";
    terms.emplace_back(it->second, body);
  }
  return format_sum(terms);
}

WedgeForm wedge_word(const std::vector<int>& indices, const Scalar& c) {
  return WedgeForm(WedgeKey{Word(), Word::from_letters(indices)}, c);
}

int wedge_grade(const WedgeKey& key) { return key.indices.length(); }

bool measure_step_ok(const Word& before, const Word& after, int r) {
  if (before.length() != after.length()) return false;
  int sb = 0;
  int sa = 0;
  for (int p = 0; p < before.length(); ++p) {
    sb += before.at(p);
    sa += after.at(p);
    if (p == r ? sa > sb - 1 : sa != sb) return false;
  }
  return true;
}

WedgeCalculus::WedgeCalculus(const FirstOrderCalculus& gamma)
    : g_(gamma), n_(gamma.dimension()), pair_rules_(static_cast<std::size_t>(n_ * n_)) {
  if (gamma.sign() != Sign::plus) throw InvalidParameter("wedge calculus requires Gamma+");
  const StructureTensors& st = gamma.algebra().tensors();
  // Row reduce the pair relations in each index-sum block with the
  // non-increasing pairs eliminated first.
  std::map<int, std::vector<IndexForm>> blocks;
  for (auto& r : pair_relations(st.Rinv, Scalar::q())) {
    const Word first = r.begin()->first;
    const int sum = first.at(0) + first.at(1);
    for (const auto& [w, c] : r)
      if (w.at(0) + w.at(1) != sum) throw DerivationError("pair relation mixes index sums");
    blocks[sum].push_back(std::move(r));
  }
  // Keyed so that non-increasing pairs sort last and are eliminated first.
  auto rank_key = [](const Word& w) { return std::make_pair(w.at(0) >= w.at(1), w); };
  using RankKey = std::pair<bool, Word>;
  for (const auto& [sum, rows] : blocks) {
    RowSpan<RankKey> span;
    for (const auto& r : rows) {
      LinComb<RankKey> f;
      for (const auto& [w, c] : r) f.add(rank_key(w), c);
      if (span.insert(f)) ++pair_rank_;
    }
    for (int i = 1; i <= n_; ++i) {
      const int j = sum - i;
      if (j < 1 || j > n_ || j > i) continue;
      // The residual of e_ij is e_ij minus a combination of the relations;
      // if it contains no non-increasing pair, it is the rule.
      const LinComb<RankKey> residual = span.reduce(LinComb<RankKey>(rank_key(Word::from_letters({i, j})), one()));
      IndexForm rule;
      bool ok = true;
      for (const auto& [k, c] : residual) {
        if (k.first) ok = false;
        rule.add(k.second, c);
      }
      if (ok) pair_rules_[static_cast<std::size_t>((i - 1) * n_ + j - 1)] = std::move(rule);
      else throw DerivationError("pair g_" + std::to_string(i) + "^g_" + std::to_string(j) + " has no rule");
    }
  }
}

const IndexForm& WedgeCalculus::pair_rule(int i, int j) const {
  if (i < j) throw InvalidParameter("pair rules exist for i >= j only");
  return pair_rules_[static_cast<std::size_t>((i - 1) * n_ + j - 1)];
}

IndexForm WedgeCalculus::normal_form_locked(const Word& indices, WedgeReduction& stats) const {
  if (auto it = nf_cache_.find(indices); it != nf_cache_.end()) return *it->second;
  IndexForm out;
  int r = -1;
  for (int p = 0; p + 1 < indices.length(); ++p)
    if (indices.at(p) >= indices.at(p + 1)) {
      r = p;
      break;
    }
  if (r < 0) {
    out.add(indices, one());
  } else {
    ++stats.steps;
    for (const auto& [w, c] : pair_rule(indices.at(r), indices.at(r + 1))) {
      const Word next = replace_pair(indices, r, w.at(0), w.at(1));
      if (!measure_step_ok(indices, next, r)) stats.measure_decreased = false;
      out.add_scaled(normal_form_locked(next, stats), c);
    }
  }
  nf_cache_.emplace(indices, std::make_unique<IndexForm>(out));
  return out;
}

IndexForm WedgeCalculus::normal_form(const Word& indices) const {
  std::lock_guard<std::recursive_mutex> lock(cache_mutex_);
  WedgeReduction stats;
  return normal_form_locked(indices, stats);
}

WedgeReduction WedgeCalculus::reduce(const WedgeForm& w) const {
  std::lock_guard<std::recursive_mutex> lock(cache_mutex_);
  WedgeReduction stats;
  for (const auto& [key, c] : w)
    for (const auto& [idx, ci] : normal_form_locked(key.indices, stats)) stats.result.add(WedgeKey{key.word, idx}, c * ci);
  return stats;
}

int WedgeCalculus::graded_dimension(int s) const {
  if (s < 0) return 0;
  if (s < 2) return s == 0 ? 1 : n_;
  const Scalar qq = Scalar::q();
  const auto rels = pair_relations(g_.algebra().tensors().Rinv, qq);
  RowSpan<Word> span;
  for_each_generator(n_, s, rels, [&](const IndexForm& gen) {
    IndexForm nf;
    for (const auto& [w, c] : gen) nf.add_scaled(normal_form(w), c);
    span.insert(nf);
  });
  return static_cast<int>(binomial(n_, s) - static_cast<long>(span.rank()));
}

const WedgeForm& WedgeCalculus::right_mult_letter(const Word& indices, int k) const {
  std::lock_guard<std::recursive_mutex> lock(cache_mutex_);
  const auto key = std::make_pair(indices, k);
  if (auto it = letter_cache_.find(key); it != letter_cache_.end()) return *it->second;
  WedgeForm out;
  if (indices.empty()) {
    out.add(WedgeKey{Word::letter(k), Word()}, one());
  } else {
    const Word prefix = indices.drop_last();
    const SphereAlgebra& x = g_.algebra();
    for (const auto& t : g_.rules(Basis::gamma_plus).at(indices.last(), k)) {
      WedgeForm head(WedgeKey{Word(), prefix}, t.coeff);
      for (int p = 0; p < t.word.length(); ++p) {
        WedgeForm next;
        for (const auto& [hk, hc] : head)
          for (const auto& [mk, mc] : right_mult_letter(hk.indices, t.word.at(p)))
            for (const auto& [v, cv] : x.normal_word_product(hk.word, mk.word))
              next.add(WedgeKey{v, mk.indices}, hc * mc * cv);
        head = std::move(next);
      }
      for (const auto& [hk, hc] : head) out.add(WedgeKey{hk.word, hk.indices.append(t.index)}, hc);
    }
  }
  return *letter_cache_.emplace(key, std::make_unique<WedgeForm>(std::move(out))).first->second;
}

WedgeForm WedgeCalculus::right_mult(const WedgeForm& w, const AlgebraElement& a) const {
  const SphereAlgebra& x = g_.algebra();
  WedgeForm out;
  for (const auto& [word, ca] : a) {
    WedgeForm cur = w;
    for (int p = 0; p < word.length(); ++p) {
      WedgeForm next;
      for (const auto& [key, c] : cur)
        for (const auto& [mk, mc] : right_mult_letter(key.indices, word.at(p)))
          for (const auto& [v, cv] : x.normal_word_product(key.word, mk.word))
            next.add(WedgeKey{v, mk.indices}, c * mc * cv);
      cur = std::move(next);
    }
    out.add_scaled(cur, ca);
  }
  return out;
}

WedgeForm WedgeCalculus::product(const WedgeForm& a, const WedgeForm& b) const {
  WedgeForm out;
  for (const auto& [kb, cb] : b) {
    const WedgeForm moved = right_mult(a, AlgebraElement(kb.word, cb));
    for (const auto& [km, cm] : moved) out.add(WedgeKey{km.word, km.indices.concat(kb.indices)}, cm);
  }
  return out;
}

WedgeForm WedgeCalculus::d_theta() const {
  const Metric& c = g_.algebra().tensors().C;
  auto as_wedge = [&](int i) {
    WedgeForm f;
    for (const auto& [key, v] : g_.convert(g_.basis_form(Basis::dx, i), Basis::gamma_plus).terms)
      f.add(WedgeKey{key.word, Word::letter(key.index)}, v);
    return f;
  };
  WedgeForm out;
  for (int i = 1; i <= n_; ++i) out.add_scaled(product(as_wedge(i), as_wedge(prime(i, n_))), c.row_entry(i));
  return out;
}

SigmaQuotient::SigmaQuotient(int n, int grade) : n_(n), grade_(grade) {
  const Spectrum sp = spectral_projectors(n);
  const auto rels = pair_relations(sp.P_plus, Scalar());
  for_each_generator(n, grade, rels, [&](const IndexForm& g) {
    IndexForm r = reduce(g);
    if (r.is_zero()) return;
    const auto last = std::prev(r.end());
    const Word key = last->first;
    r *= last->second.inverse();
    rows_.emplace(key, std::move(r));
  });
}

int SigmaQuotient::dimension() const {
  long total = 1;
  for (int p = 0; p < grade_; ++p) total *= n_;
  return static_cast<int>(total - static_cast<long>(rows_.size()));
}

IndexForm SigmaQuotient::reduce(IndexForm f) const {
  IndexForm out;
  while (!f.is_zero()) {
    const auto last = std::prev(f.end());
    const Word key = last->first;
    const Scalar c = last->second;
    const auto row = rows_.find(key);
    if (row == rows_.end()) {
      out.add(key, c);
      f.erase(key);
    } else {
      f.add_scaled(row->second, -c);
    }
  }
  return out;
}

std::map<Word, IndexForm> SigmaQuotient::residual(const WedgeForm& w) const {
  std::map<Word, IndexForm> by_word;
  for (const auto& [key, c] : w) {
    if (key.indices.length() != grade_) throw InvalidParameter("wedge form of the wrong grade");
    by_word[key.word].add(key.indices, c);
  }
  std::map<Word, IndexForm> out;
  for (auto& [word, f] : by_word) {
    IndexForm r = reduce(std::move(f));
    if (!r.is_zero()) out.emplace(word, std::move(r));
  }
  return out;
}

WedgeCheck check_wedge(const WedgeCalculus& wc) {
  const int n = wc.dimension();
  WedgeCheck out;
  out.n = n;
  out.pair_rank = wc.pair_relation_rank();
  out.pair_rank_full = out.pair_rank == n * (n + 1) / 2;
  if (!out.pair_rank_full) out.failures.push_back("pair relations have rank " + std::to_string(out.pair_rank));

  out.diagonal_rules_hold = true;
  for (int i = 1; i <= n; ++i) {
    const IndexForm& rule = wc.pair_rule(i, i);
    if (2 * i != n + 1) {
      out.diagonal_rules_hold = out.diagonal_rules_hold && rule.is_zero();
    } else {
      bool shape = !rule.is_zero();
      for (const auto& [w, c] : rule) shape = shape && w.at(0) < w.at(1) && w.at(0) + w.at(1) == 2 * i;
      out.diagonal_rules_hold = out.diagonal_rules_hold && shape;
    }
  }
  if (!out.diagonal_rules_hold) out.failures.push_back("g_i ^ g_i rules have the wrong shape");

  const Metric& c = wc.first_order().algebra().tensors().C;
  WedgeForm metric;
  for (int i = 1; i <= n; ++i) metric.add_scaled(wedge_word({i, prime(i, n)}), c.row_entry(i));
  out.metric_relation_reduces = wc.normal_form(metric).is_zero();
  if (!out.metric_relation_reduces) out.failures.push_back("C^{ij} g_i ^ g_j does not reduce to zero");

  for (int s = 0; s <= n + 1; ++s) out.graded_dimensions.push_back(wc.graded_dimension(s));
  out.top_grade_empty = out.graded_dimensions.back() == 0;
  for (const Word& w : all_sequences(n, n + 1))
    out.top_grade_empty = out.top_grade_empty && wc.normal_form(w).is_zero();
  if (!out.top_grade_empty) out.failures.push_back("grade N+1 does not vanish");

  const WedgeForm dt = wc.d_theta();
  out.d_theta_nonzero = !SigmaQuotient(n, 2).residual(dt).empty();
  out.d_theta_squared_nonzero = !SigmaQuotient(n, 4).residual(wc.product(dt, dt)).empty();
  if (!out.d_theta_nonzero) out.failures.push_back("d theta vanishes modulo the P+ ideal");
  if (!out.d_theta_squared_nonzero) out.failures.push_back("d theta ^ d theta vanishes modulo the P+ ideal");
  return out;
}

}  // namespace esq
