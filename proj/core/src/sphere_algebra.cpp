#include "esq/sphere_algebra.hpp"

#include <algorithm>

#include "esq/error.hpp"

namespace esq {

// ----------------------------------------------------------------------- Word

Word Word::letter(int a) { return Word().append(a); }

Word Word::from_letters(const std::vector<int>& letters) {
  Word w;
  for (int a : letters) w = w.append(a);
  return w;
}

Word Word::append(int a) const {
  const int len = length();
  if (len >= kMaxLength) throw DegreeExceeded(len + 1, kMaxLength);
  Word w;
  w.code_ = code_ + (std::uint64_t{1} << 60) + (static_cast<std::uint64_t>(a) << (56 - 4 * len));
  return w;
}

Word Word::concat(const Word& o) const {
  const int len = length(), olen = o.length();
  if (len + olen > kMaxLength) throw DegreeExceeded(len + olen, kMaxLength);
  if (olen == 0) return *this;
  Word w;
  const std::uint64_t letters = o.code_ & ((std::uint64_t{1} << 60) - 1);
  w.code_ = code_ + (static_cast<std::uint64_t>(olen) << 60) + (letters >> (4 * len));
  return w;
}

Word Word::prefix(int len) const {
  if (len <= 0) return Word();
  if (len >= length()) return *this;
  const std::uint64_t mask = ~((std::uint64_t{1} << (60 - 4 * len)) - 1) & ((std::uint64_t{1} << 60) - 1);
  Word w;
  w.code_ = (code_ & mask) | (static_cast<std::uint64_t>(len) << 60);
  return w;
}

Word Word::suffix(int from) const {
  Word w;
  for (int p = from; p < length(); ++p) w = w.append(at(p));
  return w;
}

std::vector<int> Word::letters() const {
  std::vector<int> out;
  for (int p = 0; p < length(); ++p) out.push_back(at(p));
  return out;
}

std::string Word::to_string(const std::string& symbol) const {
  if (empty()) return "1";
  std::string out;
  for (int p = 0; p < length(); ++p) {
    if (p > 0) out += "*";
    out += symbol + "_" + std::to_string(at(p));
  }
  return out;
}

// -------------------------------------------------------------------- helpers

AlgebraElement free_product(const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement out;
  for (const auto& [u, cu] : a)
    for (const auto& [v, cv] : b) out.add(u.concat(v), cu * cv);
  return out;
}

int degree(const AlgebraElement& e) {
  int d = -1;
  for (const auto& [w, c] : e) d = std::max(d, w.length());
  return d;
}

std::string to_string(const AlgebraElement& e) {
  std::vector<std::pair<Scalar, std::string>> terms;
  for (auto it = e.terms().rbegin(); it != e.terms().rend(); ++it)
    terms.emplace_back(it->second, it->first.empty() ? "" : it->first.to_string());
  return format_sum(terms);
}

long classical_dimension(int n, int k) {
  auto binom = [](long a, long b) -> long {
    if (b < 0 || a < b) return 0;
    long r = 1;
    for (long i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  return binom(n + k - 1, k) - binom(n + k - 3, k - 2);
}

// ------------------------------------------------------------- ReductionTable

namespace {

// Subtracts multiples of pivot rows from e, scanning from the largest word
// down; rows only contain words below their pivot, so this terminates.
template <class Lookup>
AlgebraElement reduce_top_down(AlgebraElement e, const Lookup& row_of) {
  if (e.is_zero()) return e;
  Word cursor = e.terms().rbegin()->first;
  while (true) {
    if (const AlgebraElement* row = row_of(cursor)) {
      const Scalar c = e.coefficient(cursor);
      if (!c.is_zero()) e.add_scaled(*row, -c);
    }
    auto it = e.terms().lower_bound(cursor);
    if (it == e.terms().begin()) break;
    --it;
    cursor = it->first;
  }
  return e;
}

void enumerate_words(int n, int len, std::vector<Word>& out) {
  out.clear();
  out.push_back(Word());
  for (int p = 0; p < len; ++p) {
    std::vector<Word> next;
    next.reserve(out.size() * static_cast<std::size_t>(n));
    for (const auto& w : out)
      for (int a = 1; a <= n; ++a) next.push_back(w.append(a));
    out.swap(next);
  }
}

}  // namespace

ReductionTable::ReductionTable(int n, const std::vector<AlgebraElement>& relations, int max_degree)
    : n_(n), max_degree_(max_degree) {
  if (max_degree > Word::kMaxLength) throw DegreeExceeded(max_degree, Word::kMaxLength);
  for (int total = 0; total <= max_degree; ++total) {
    for (const auto& r : relations) {
      const int d = degree(r);
      if (d > total) continue;
      const int room = total - d;
      for (int left = 0; left <= room; ++left) {
        std::vector<Word> us, vs;
        enumerate_words(n, left, us);
        enumerate_words(n, room - left, vs);
        for (const auto& u : us)
          for (const auto& v : vs) insert(free_product(free_product(monomial(u), r), monomial(v)));
      }
    }
  }
}

void ReductionTable::insert(AlgebraElement row) {
  row = reduce(row);
  if (row.is_zero()) return;
  const Word lead = row.terms().rbegin()->first;
  const Scalar c = row.terms().rbegin()->second;
  if (!c.is_one()) row *= c.inverse();
  rows_.emplace(lead, std::move(row));
}

AlgebraElement ReductionTable::reduce(const AlgebraElement& e) const {
  const int d = degree(e);
  if (d > max_degree_) throw DegreeExceeded(d, max_degree_);
  return reduce_top_down(e, [this](const Word& w) -> const AlgebraElement* {
    auto it = rows_.find(w);
    return it == rows_.end() ? nullptr : &it->second;
  });
}

long ReductionTable::dimension(int k) const {
  if (k > max_degree_) throw DegreeExceeded(k, max_degree_);
  long total = 1;
  for (int p = 0; p < k; ++p) total *= n_;
  Word lo = Word::from_letters(std::vector<int>(static_cast<std::size_t>(k), 1));
  long pivots = 0;
  for (auto it = rows_.lower_bound(lo); it != rows_.end() && it->first.length() == k; ++it) ++pivots;
  return total - pivots;
}

// -------------------------------------------------------------- SphereAlgebra

SphereAlgebra::SphereAlgebra(int n, AlgebraOptions options)
    : n_(n), options_(options), degree_limit_(options.degree_limit), st_(structure(n)) {
  if (options_.table_degree < 2) throw InvalidParameter("table degree must be at least 2");
  if (degree_limit_ > Word::kMaxLength) degree_limit_ = Word::kMaxLength;
  build_relations();
  table_ = std::make_unique<ReductionTable>(n_, relations_, options_.table_degree);

  leading_pair_.assign(static_cast<std::size_t>(n_ + 1), std::vector<bool>(static_cast<std::size_t>(n_ + 1), false));
  for (const auto& [w, row] : table_->rows()) {
    if (w.length() < 2) throw Error("the relations collapse the algebra in degree " + std::to_string(w.length()));
    if (w.length() != 2) continue;
    AlgebraElement tail = row;
    tail.erase(w);
    rules_.emplace(w, -table_->reduce(tail));
    leading_pair_[static_cast<std::size_t>(w.at(0))][static_cast<std::size_t>(w.at(1))] = true;
  }
  letter_cache_.resize(static_cast<std::size_t>(n_ + 1));
  rewriting_ = true;
  confluent_ = certify_overlaps();
  if (!confluent_) {
    rewriting_ = false;
    degree_limit_ = options_.table_degree;
  }
}

void SphereAlgebra::build_relations() {
  const Scalar q = Scalar::q();
  const Scalar qinv = q.inverse();
  const Scalar c = (Scalar::q_power(n_ - 1) - Scalar::q_power(n_ - 3)) / (Scalar(1L) + Scalar::q_power(n_ - 2));
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j) {
      AlgebraElement r;
      for (const auto& e : st_.Rinv.column(i, j)) r.add(Word::from_letters({e.k, e.l}), e.value);
      r.add(Word::from_letters({i, j}), -qinv);
      for (const auto& e : st_.K.column(i, j)) r.add(Word::from_letters({e.k, e.l}), -c * e.value);
      relations_.push_back(std::move(r));
    }
  AlgebraElement sphere = sphere_element();
  sphere.add(Word(), Scalar(-1L));
  relations_.push_back(std::move(sphere));
}

AlgebraElement SphereAlgebra::sphere_element() const {
  AlgebraElement s;
  for (int k = 1; k <= n_; ++k) s.add(Word::from_letters({k, prime(k, n_)}), st_.C.row_entry(k));
  return s;
}

bool SphereAlgebra::certify_overlaps() const {
  // Rewriting must reproduce the table in every degree the table covers.
  for (int k = 0; k <= options_.table_degree; ++k) {
    std::vector<Word> words;
    enumerate_words(n_, k, words);
    long normal = 0;
    for (const auto& w : words) {
      const bool nw = is_normal_word(w);
      if (nw) ++normal;
      if (nw == table_->is_pivot(w)) return false;
    }
    if (normal != table_->dimension(k)) return false;
  }
  // Every overlap x_a x_b x_c of two leading words must resolve.
  for (const auto& [ab, tail_ab] : rules_)
    for (const auto& [bc, tail_bc] : rules_) {
      if (ab.at(1) != bc.at(0)) continue;
      const int a = ab.at(0), c = bc.at(1);
      AlgebraElement left, right;
      for (const auto& [w, coef] : tail_ab) left.add_scaled(normal_form(w.append(c)), coef);
      for (const auto& [w, coef] : tail_bc) right.add_scaled(normal_form(Word::letter(a).concat(w)), coef);
      if (left != right) return false;
    }
  return true;
}

bool SphereAlgebra::is_normal_word(const Word& w) const {
  for (int p = 0; p + 1 < w.length(); ++p)
    if (leading_pair_[static_cast<std::size_t>(w.at(p))][static_cast<std::size_t>(w.at(p + 1))]) return false;
  return true;
}

bool SphereAlgebra::is_normal(const AlgebraElement& e) const {
  for (const auto& [w, c] : e)
    if (!is_normal_word(w)) return false;
  return true;
}

AlgebraElement SphereAlgebra::compute_word_times_letter(const Word& u, int a) const {
  if (u.length() + 1 > degree_limit_) throw DegreeExceeded(u.length() + 1, degree_limit_);
  if (u.empty()) return generator(a);
  const int b = u.last();
  if (!leading_pair_[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)]) return monomial(u.append(a));
  const Word head = u.drop_last();
  const AlgebraElement& tail = rules_.at(Word::from_letters({b, a}));
  AlgebraElement out;
  for (const auto& [t, coef] : tail) {
    AlgebraElement acc = monomial(head);
    for (int p = 0; p < t.length(); ++p) {
      AlgebraElement next;
      for (const auto& [v, cv] : acc) next.add_scaled(normal_word_times_letter(v, t.at(p)), cv);
      acc = std::move(next);
    }
    out.add_scaled(acc, coef);
  }
  return out;
}

const AlgebraElement& SphereAlgebra::normal_word_times_letter(const Word& u, int a) const {
  auto& cache = letter_cache_[static_cast<std::size_t>(a)];
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache.find(u.code());
    if (it != cache.end()) return *it->second;
  }
  auto value = std::make_unique<AlgebraElement>(compute_word_times_letter(u, a));
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto [it, inserted] = cache.try_emplace(u.code(), std::move(value));
  return *it->second;
}

const AlgebraElement& SphereAlgebra::normal_word_product(const Word& u, const Word& v) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = product_cache_.find({u, v});
    if (it != product_cache_.end()) return *it->second;
  }
  AlgebraElement acc = monomial(u);
  for (int p = 0; p < v.length(); ++p) {
    AlgebraElement next;
    for (const auto& [w, c] : acc) next.add_scaled(normal_word_times_letter(w, v.at(p)), c);
    acc = std::move(next);
  }
  auto value = std::make_unique<AlgebraElement>(std::move(acc));
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto [it, inserted] = product_cache_.try_emplace({u, v}, std::move(value));
  return *it->second;
}

AlgebraElement SphereAlgebra::normal_form(const Word& w) const {
  if (w.length() > degree_limit_) throw DegreeExceeded(w.length(), degree_limit_);
  if (!rewriting_) return table_->reduce(monomial(w));
  if (is_normal_word(w)) return monomial(w);
  return normal_word_product(Word(), w);
}

AlgebraElement SphereAlgebra::normal_form(const AlgebraElement& e) const {
  AlgebraElement out;
  for (const auto& [w, c] : e) {
    if (rewriting_ && is_normal_word(w) && w.length() <= degree_limit_)
      out.add(w, c);
    else
      out.add_scaled(normal_form(w), c);
  }
  return out;
}

AlgebraElement SphereAlgebra::multiply(const AlgebraElement& a, const AlgebraElement& b) const {
  if (!rewriting_) return table_->reduce(free_product(a, b));
  const AlgebraElement na = is_normal(a) ? a : normal_form(a);
  const AlgebraElement nb = is_normal(b) ? b : normal_form(b);
  AlgebraElement out;
  for (const auto& [u, cu] : na)
    for (const auto& [v, cv] : nb) out.add_scaled(normal_word_product(u, v), cu * cv);
  return out;
}

AlgebraElement SphereAlgebra::times_letter(const AlgebraElement& a, int i) const {
  if (!rewriting_) return table_->reduce(free_product(a, generator(i)));
  const AlgebraElement na = is_normal(a) ? a : normal_form(a);
  AlgebraElement out;
  for (const auto& [u, c] : na) out.add_scaled(normal_word_times_letter(u, i), c);
  return out;
}

AlgebraElement SphereAlgebra::star(const AlgebraElement& e) const {
  AlgebraElement out;
  for (const auto& [w, c] : e) {
    Scalar coef = c;
    Word reversed;
    for (int p = w.length() - 1; p >= 0; --p) {
      const int i = w.at(p);
      coef *= st_.C.row_entry(i);
      reversed = reversed.append(prime(i, n_));
    }
    out.add(reversed, coef);
  }
  return normal_form(out);
}

long SphereAlgebra::graded_dimension(int k) const {
  if (!rewriting_) return table_->dimension(k);
  if (k == 0) return 1;
  std::vector<long> count(static_cast<std::size_t>(n_ + 1), 1);
  count[0] = 0;
  for (int len = 2; len <= k; ++len) {
    std::vector<long> next(static_cast<std::size_t>(n_ + 1), 0);
    for (int b = 1; b <= n_; ++b)
      for (int a = 1; a <= n_; ++a)
        if (!leading_pair_[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)])
          next[static_cast<std::size_t>(a)] += count[static_cast<std::size_t>(b)];
    count.swap(next);
  }
  long total = 0;
  for (long c : count) total += c;
  return total;
}

std::vector<Word> SphereAlgebra::basis_words(int k) const {
  if (k > degree_limit_) throw DegreeExceeded(k, degree_limit_);
  std::vector<Word> words{Word()};
  for (int len = 0; len < k; ++len) {
    std::vector<Word> next;
    for (const auto& w : words)
      for (int a = 1; a <= n_; ++a) {
        Word x = w.append(a);
        if (rewriting_ ? is_normal_word(x) : !table_->is_pivot(x)) next.push_back(x);
      }
    words.swap(next);
  }
  return words;
}

}  // namespace esq
