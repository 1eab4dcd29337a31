#include "esq/multipoly.hpp"

#include <algorithm>
#include <sstream>

#include "esq/error.hpp"

namespace esq {

namespace {

int degree_of(const MultiPoly::Monomial& m) {
  int d = 0;
  for (auto e : m) d += e;
  return d;
}

}  // namespace

MultiPoly::MultiPoly(const Scalar& c) {
  if (!c.is_zero()) terms_.emplace(Monomial{}, c);
}

MultiPoly MultiPoly::variable(int var) {
  if (var < 0 || var >= kVariables) throw InvalidParameter("unknown variable index");
  MultiPoly p;
  Monomial m{};
  m[static_cast<std::size_t>(var)] = 1;
  p.terms_.emplace(m, Scalar(1L));
  return p;
}

void MultiPoly::add_term(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{});
}

Scalar MultiPoly::constant_term() const { return coefficient(Monomial{}); }

int MultiPoly::total_degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, degree_of(m));
  return d;
}

int MultiPoly::degree_in(int var) const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m[static_cast<std::size_t>(var)]));
  return d;
}

bool MultiPoly::is_univariate_in(int var) const {
  for (const auto& [m, c] : terms_)
    for (int v = 0; v < kVariables; ++v)
      if (v != var && m[static_cast<std::size_t>(v)] != 0) return false;
  return true;
}

Scalar MultiPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar() : it->second;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly p = *this;
  for (auto& [m, c] : p.terms_) c = -c;
  return p;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly p;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      MultiPoly::Monomial m;
      for (std::size_t v = 0; v < m.size(); ++v) m[v] = static_cast<std::uint8_t>(ma[v] + mb[v]);
      p.add_term(m, ca * cb);
    }
  return p;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) { return *this = *this * o; }

MultiPoly& MultiPoly::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  if (c.is_one()) return *this;
  for (auto& [m, x] : terms_) x *= c;
  return *this;
}

MultiPoly MultiPoly::substitute(int var, const MultiPoly& value) const {
  const auto v = static_cast<std::size_t>(var);
  std::vector<MultiPoly> powers{MultiPoly(1L)};
  MultiPoly out;
  for (const auto& [m, c] : terms_) {
    const int e = m[v];
    while (static_cast<int>(powers.size()) <= e) powers.push_back(powers.back() * value);
    Monomial rest = m;
    rest[v] = 0;
    MultiPoly term;
    term.terms_.emplace(rest, c);
    out += term * powers[static_cast<std::size_t>(e)];
  }
  return out;
}

Scalar MultiPoly::evaluate(const std::array<Scalar, kVariables>& values) const {
  Scalar sum;
  for (const auto& [m, c] : terms_) {
    Scalar t = c;
    for (std::size_t v = 0; v < m.size(); ++v)
      if (m[v] != 0) t *= pow(values[v], m[v]);
    sum += t;
  }
  return sum;
}

std::vector<Scalar> MultiPoly::univariate_coefficients(int var) const {
  if (!is_univariate_in(var)) throw InvalidParameter("polynomial is not univariate");
  std::vector<Scalar> out(static_cast<std::size_t>(std::max(degree_in(var), 0) + 1));
  for (const auto& [m, c] : terms_) out[m[static_cast<std::size_t>(var)]] = c;
  if (terms_.empty()) out.clear();
  return out;
}

MultiPoly MultiPoly::from_univariate(const std::vector<Scalar>& coeffs, int var) {
  MultiPoly p;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    Monomial m{};
    m[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(k);
    p.add_term(m, coeffs[k]);
  }
  return p;
}

std::string MultiPoly::to_string(const std::array<std::string, kVariables>& names) const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<Monomial, Scalar>> sorted(terms_.begin(), terms_.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    const int da = degree_of(a.first), db = degree_of(b.first);
    if (da != db) return da > db;
    return a.first > b.first;
  });
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : sorted) {
    std::string mono;
    for (std::size_t v = 0; v < m.size(); ++v) {
      if (m[v] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[v];
      if (m[v] > 1) mono += "^" + std::to_string(m[v]);
    }
    Scalar coeff = c;
    bool negative = false;
    // Pull a leading minus out of single-term coefficients for readability.
    if (coeff.is_polynomial() && coeff.numerator().term_count() == 1 && coeff.numerator().leading() < 0) {
      negative = true;
      coeff = -coeff;
    }
    if (!first) out << (negative ? " - " : " + ");
    else if (negative) out << "-";
    first = false;
    if (mono.empty()) {
      out << factor_string(coeff);
    } else if (coeff.is_one()) {
      out << mono;
    } else {
      out << factor_string(coeff) << "*" << mono;
    }
  }
  return out.str();
}

namespace {

using UPoly = std::vector<Scalar>;

void trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

UPoly urem(UPoly a, const UPoly& b) {
  trim(a);
  const Scalar inv = b.back().inverse();
  while (a.size() >= b.size()) {
    const Scalar f = a.back() * inv;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= f * b[k];
    a.pop_back();
    trim(a);
  }
  return a;
}

}  // namespace

MultiPoly univariate_gcd(const MultiPoly& a, const MultiPoly& b, int var) {
  UPoly x = a.univariate_coefficients(var), y = b.univariate_coefficients(var);
  trim(x);
  trim(y);
  while (!y.empty()) {
    UPoly r = urem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  if (x.empty()) return {};
  const Scalar inv = x.back().inverse();
  for (auto& c : x) c *= inv;
  return MultiPoly::from_univariate(x, var);
}

std::optional<Scalar> scalar_sqrt(const Scalar& x) {
  if (x.is_zero()) return Scalar();
  LaurentPoly root;
  const LaurentPoly& den = x.denominator();
  if (!poly_sqrt(x.numerator() * den, root)) return std::nullopt;
  return normalize(root, den);
}

std::optional<std::vector<Scalar>> univariate_roots(const MultiPoly& p, int var) {
  UPoly c = p.univariate_coefficients(var);
  trim(c);
  if (c.empty()) return std::nullopt;
  if (c.size() == 1) return std::vector<Scalar>{};
  if (c.size() == 2) return std::vector<Scalar>{-c[0] / c[1]};
  if (c.size() != 3) return std::nullopt;
  const Scalar disc = c[1] * c[1] - Scalar(4L) * c[2] * c[0];
  auto root = scalar_sqrt(disc);
  if (!root) return std::nullopt;
  const Scalar two_a = Scalar(2L) * c[2];
  std::vector<Scalar> out{(-c[1] - *root) / two_a};
  if (!root->is_zero()) out.push_back((-c[1] + *root) / two_a);
  return out;
}

}  // namespace esq
