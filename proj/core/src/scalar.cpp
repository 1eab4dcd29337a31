#include "esq/scalar.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "esq/error.hpp"

namespace esq {

namespace {

using IntPoly = std::vector<mpz_class>;  // low-to-high, s-power stripped

void trim_top(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

mpz_class content(const IntPoly& p) {
  mpz_class g = 0;
  for (const auto& c : p) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

void make_primitive(IntPoly& p) {
  trim_top(p);
  if (p.empty()) return;
  mpz_class g = content(p);
  if (p.back() < 0) g = -g;
  if (g != 1)
    for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

// Pseudo-remainder of a by b (deg a >= deg b >= 0).
IntPoly pseudo_remainder(IntPoly a, const IntPoly& b) {
  const std::size_t nb = b.size();
  const mpz_class& lb = b.back();
  while (a.size() >= nb && !a.empty()) {
    const std::size_t shift = a.size() - nb;
    const mpz_class la = a.back();
    for (auto& c : a) c *= lb;
    for (std::size_t k = 0; k < nb; ++k) a[shift + k] -= la * b[k];
    trim_top(a);
  }
  return a;
}

}  // namespace

// Internal helpers with access to LaurentPoly's representation.
class PolyOps {
 public:
  static IntPoly to_int_primitive(const LaurentPoly& p) {
    mpz_class l = 1;
    for (const auto& c : p.c_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    IntPoly out;
    out.reserve(p.c_.size());
    for (const auto& c : p.c_) {
      mpz_class v = l / c.get_den();
      v *= c.get_num();
      out.push_back(std::move(v));
    }
    make_primitive(out);
    return out;
  }

  static LaurentPoly from_int_monic(const IntPoly& p) {
    LaurentPoly out;
    if (p.empty()) return out;
    const mpz_class& lc = p.back();
    out.c_.reserve(p.size());
    for (const auto& c : p) {
      Rational r(c, lc);
      r.canonicalize();
      out.c_.push_back(std::move(r));
    }
    out.low_ = 0;
    out.trim();
    return out;
  }

  // Ordinary polynomial division over Q; both arguments with low_ == 0.
  static std::pair<LaurentPoly, LaurentPoly> divmod0(const LaurentPoly& a, const LaurentPoly& b) {
    if (b.is_zero()) throw DivisionByZero();
    if (a.is_zero() || a.c_.size() < b.c_.size()) return {LaurentPoly(), a};
    std::vector<Rational> r = a.c_;
    const std::size_t nb = b.c_.size();
    std::vector<Rational> quot(r.size() - nb + 1);
    const Rational inv_lb = 1 / b.c_.back();
    for (std::size_t top = r.size(); top-- >= nb;) {
      Rational f = r[top] * inv_lb;
      if (f != 0) {
        const std::size_t shift = top - (nb - 1);
        for (std::size_t k = 0; k < nb; ++k) r[shift + k] -= f * b.c_[k];
        quot[shift] = f;
      }
      if (top == nb - 1) break;
    }
    LaurentPoly q, rem;
    q.c_ = std::move(quot);
    q.low_ = 0;
    q.trim();
    r.resize(nb - 1);
    rem.c_ = std::move(r);
    rem.low_ = 0;
    rem.trim();
    return {q, rem};
  }
};

// ---------------------------------------------------------------- LaurentPoly

void LaurentPoly::trim() {
  std::size_t first = 0;
  while (first < c_.size() && c_[first] == 0) ++first;
  if (first == c_.size()) {
    c_.clear();
    low_ = 0;
    return;
  }
  std::size_t last = c_.size();
  while (c_[last - 1] == 0) --last;
  if (first > 0 || last < c_.size()) {
    c_.erase(c_.begin() + static_cast<std::ptrdiff_t>(last), c_.end());
    c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(first));
    low_ += static_cast<int>(first);
  }
}

LaurentPoly LaurentPoly::constant(const Rational& c) { return monomial(c, 0); }

LaurentPoly LaurentPoly::monomial(const Rational& c, int exponent) {
  LaurentPoly p;
  if (c == 0) return p;
  p.low_ = exponent;
  p.c_.push_back(c);
  return p;
}

LaurentPoly LaurentPoly::from_terms(const std::map<int, Rational>& terms) {
  LaurentPoly p;
  if (terms.empty()) return p;
  p.low_ = terms.begin()->first;
  p.c_.assign(static_cast<std::size_t>(terms.rbegin()->first - p.low_ + 1), Rational(0));
  for (const auto& [e, c] : terms) p.c_[static_cast<std::size_t>(e - p.low_)] = c;
  p.trim();
  return p;
}

bool LaurentPoly::is_one() const { return c_.size() == 1 && low_ == 0 && c_[0] == 1; }

std::size_t LaurentPoly::term_count() const {
  return static_cast<std::size_t>(
      std::count_if(c_.begin(), c_.end(), [](const Rational& c) { return c != 0; }));
}

Rational LaurentPoly::coefficient(int exponent) const {
  if (c_.empty() || exponent < low_ || exponent > high()) return 0;
  return c_[static_cast<std::size_t>(exponent - low_)];
}

std::map<int, Rational> LaurentPoly::terms() const {
  std::map<int, Rational> out;
  for (std::size_t k = 0; k < c_.size(); ++k)
    if (c_[k] != 0) out.emplace(low_ + static_cast<int>(k), c_[k]);
  return out;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly p = *this;
  for (auto& c : p.c_) c = -c;
  return p;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  const int lo = std::min(low_, o.low_);
  const int hi = std::max(high(), o.high());
  if (lo < low_) {
    c_.insert(c_.begin(), static_cast<std::size_t>(low_ - lo), Rational(0));
    low_ = lo;
  }
  if (static_cast<int>(c_.size()) < hi - lo + 1) c_.resize(static_cast<std::size_t>(hi - lo + 1));
  const std::size_t off = static_cast<std::size_t>(o.low_ - low_);
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[off + k] += o.c_[k];
  trim();
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = -o;
  const int lo = std::min(low_, o.low_);
  const int hi = std::max(high(), o.high());
  if (lo < low_) {
    c_.insert(c_.begin(), static_cast<std::size_t>(low_ - lo), Rational(0));
    low_ = lo;
  }
  if (static_cast<int>(c_.size()) < hi - lo + 1) c_.resize(static_cast<std::size_t>(hi - lo + 1));
  const std::size_t off = static_cast<std::size_t>(o.low_ - low_);
  for (std::size_t k = 0; k < o.c_.size(); ++k) c_[off + k] -= o.c_[k];
  trim();
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly p;
  if (a.is_zero() || b.is_zero()) return p;
  p.low_ = a.low_ + b.low_;
  p.c_.assign(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j)
      if (b.c_[j] != 0) p.c_[i + j] += a.c_[i] * b.c_[j];
  }
  p.trim();
  return p;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) { return *this = *this * o; }

LaurentPoly LaurentPoly::scaled(const Rational& c) const {
  if (c == 0) return {};
  LaurentPoly p = *this;
  for (auto& x : p.c_) x *= c;
  return p;
}

LaurentPoly LaurentPoly::shifted(int by) const {
  LaurentPoly p = *this;
  if (!p.is_zero()) p.low_ += by;
  return p;
}

Rational LaurentPoly::at_one() const {
  Rational sum = 0;
  for (const auto& c : c_) sum += c;
  return sum;
}

Rational LaurentPoly::evaluate(const Rational& s) const {
  if (c_.empty()) return 0;
  if (s == 0) throw DivisionByZero();
  Rational acc = 0;
  for (std::size_t k = c_.size(); k-- > 0;) acc = acc * s + c_[k];
  Rational base = 1;
  const Rational factor = low_ >= 0 ? s : Rational(1 / s);
  for (int k = 0; k < std::abs(low_); ++k) base *= factor;
  return acc * base;
}

namespace {

std::string q_power_string(int s_exponent) {
  if (s_exponent == 0) return "";
  if (s_exponent % 2 == 0) {
    const int e = s_exponent / 2;
    if (e == 1) return "q";
    return "q^" + std::to_string(e);
  }
  return "q^(" + std::to_string(s_exponent) + "/2)";
}

}  // namespace

std::string rational_string(const Rational& r) { return r.get_str(); }

std::string LaurentPoly::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t k = c_.size(); k-- > 0;) {
    const Rational& c = c_[k];
    if (c == 0) continue;
    const int e = low_ + static_cast<int>(k);
    const bool negative = c < 0;
    const Rational mag = abs(c);
    if (first) {
      if (negative) out << "-";
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    const std::string qp = q_power_string(e);
    if (qp.empty()) {
      out << rational_string(mag);
    } else if (mag == 1) {
      out << qp;
    } else {
      out << rational_string(mag) << "*" << qp;
    }
  }
  return out.str();
}

// ------------------------------------------------------------- polynomial ops

LaurentPoly poly_gcd(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() && b.is_zero()) return {};
  const LaurentPoly one = LaurentPoly::constant(1);
  if (a.is_zero()) return PolyOps::from_int_monic(PolyOps::to_int_primitive(b));
  if (b.is_zero()) return PolyOps::from_int_monic(PolyOps::to_int_primitive(a));
  if (a.is_monomial() || b.is_monomial()) return one;
  IntPoly x = PolyOps::to_int_primitive(a);
  IntPoly y = PolyOps::to_int_primitive(b);
  if (x == y) return PolyOps::from_int_monic(x);
  if (x.size() < y.size()) std::swap(x, y);
  while (!y.empty()) {
    if (y.size() == 1) return one;
    IntPoly r = pseudo_remainder(x, y);
    x = std::move(y);
    make_primitive(r);
    y = std::move(r);
  }
  if (x.size() == 1) return one;
  return PolyOps::from_int_monic(x);
}

std::pair<LaurentPoly, LaurentPoly> poly_divmod(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero()) throw DivisionByZero();
  if (a.is_zero()) return {LaurentPoly(), LaurentPoly()};
  if (a.low() < 0 || b.low() < 0) throw Error("poly_divmod: negative exponents");
  const int da = a.high(), db = b.high();
  if (da < db) return {LaurentPoly(), a};
  std::vector<Rational> r(static_cast<std::size_t>(da + 1)), bv(static_cast<std::size_t>(db + 1));
  for (const auto& [e, c] : a.terms()) r[static_cast<std::size_t>(e)] = c;
  for (const auto& [e, c] : b.terms()) bv[static_cast<std::size_t>(e)] = c;
  std::map<int, Rational> qt;
  const Rational inv = 1 / bv.back();
  for (int top = da; top >= db; --top) {
    const Rational f = r[static_cast<std::size_t>(top)] * inv;
    if (f == 0) continue;
    for (int k = 0; k <= db; ++k)
      r[static_cast<std::size_t>(top - db + k)] -= f * bv[static_cast<std::size_t>(k)];
    qt[top - db] = f;
  }
  std::map<int, Rational> rt;
  for (int k = 0; k < db; ++k)
    if (r[static_cast<std::size_t>(k)] != 0) rt[k] = r[static_cast<std::size_t>(k)];
  return {LaurentPoly::from_terms(qt), LaurentPoly::from_terms(rt)};
}

LaurentPoly exact_quotient(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero()) throw DivisionByZero();
  if (a.is_zero()) return {};
  if (b.is_monomial()) return a.scaled(1 / b.leading()).shifted(-b.low());
  const int shift = a.low() - b.low();
  auto [quot, rem] = PolyOps::divmod0(a.shifted(-a.low()), b.shifted(-b.low()));
  if (!rem.is_zero()) throw Error("exact_quotient: inexact division");
  return quot.shifted(shift);
}

bool poly_sqrt(const LaurentPoly& a, LaurentPoly& root) {
  if (a.is_zero()) {
    root = {};
    return true;
  }
  if (a.low() % 2 != 0 || (a.high() - a.low()) % 2 != 0) return false;
  const Rational a0 = a.trailing();
  if (a0 < 0) return false;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), a0.get_num_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), a0.get_den_mpz_t());
  if (rn * rn != a0.get_num() || rd * rd != a0.get_den()) return false;
  const int deg = (a.high() - a.low()) / 2;
  std::vector<Rational> r(static_cast<std::size_t>(deg + 1));
  r[0] = Rational(rn, rd);
  const Rational two_r0 = 2 * r[0];
  for (int k = 1; k <= deg; ++k) {
    Rational acc = a.coefficient(a.low() + k);
    for (int i = 1; i < k; ++i) acc -= r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(k - i)];
    r[static_cast<std::size_t>(k)] = acc / two_r0;
  }
  std::map<int, Rational> t;
  for (int k = 0; k <= deg; ++k)
    if (r[static_cast<std::size_t>(k)] != 0) t[k + a.low() / 2] = r[static_cast<std::size_t>(k)];
  LaurentPoly cand = LaurentPoly::from_terms(t);
  if (cand * cand != a) return false;
  root = cand;
  return true;
}

// --------------------------------------------------------------------- Scalar

Scalar::Scalar(long c) : num_(LaurentPoly::constant(c)), den_(LaurentPoly::constant(1)) {}

Scalar::Scalar(const Rational& c) : num_(LaurentPoly::constant(c)), den_(LaurentPoly::constant(1)) {}

Scalar::Scalar(LaurentPoly p) : num_(std::move(p)), den_(LaurentPoly::constant(1)) {}

Scalar Scalar::s_power(int e) { return Scalar(LaurentPoly::monomial(1, e)); }

Scalar normalize(LaurentPoly num, LaurentPoly den) {
  if (den.is_zero()) throw DivisionByZero();
  Scalar out;
  if (num.is_zero()) return out;
  const int shift = den.low();
  if (shift != 0) {
    num = num.shifted(-shift);
    den = den.shifted(-shift);
  }
  if (!den.is_monomial()) {
    LaurentPoly g = poly_gcd(num, den);
    if (!g.is_one()) {
      num = exact_quotient(num, g);
      den = exact_quotient(den, g);
    }
  }
  const Rational lc = den.leading();
  if (lc != 1) {
    const Rational inv = 1 / lc;
    num = num.scaled(inv);
    den = den.scaled(inv);
  }
  out.num_ = std::move(num);
  out.den_ = std::move(den);
  return out;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw DivisionByZero();
  return normalize(den_, num_);
}

Scalar Scalar::operator-() const {
  Scalar out = *this;
  out.num_ = -out.num_;
  return out;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_.is_one() && o.den_.is_one()) {
    num_ += o.num_;
    return *this;
  }
  if (den_.is_one()) {
    // a + c/d with gcd(c, d) = 1 stays reduced.
    num_ = num_ * o.den_ + o.num_;
    den_ = o.den_;
    return *this;
  }
  if (o.den_.is_one()) {
    num_ += o.num_ * den_;
    return *this;
  }
  if (den_ == o.den_) {
    return *this = normalize(num_ + o.num_, den_);
  }
  LaurentPoly g = poly_gcd(den_, o.den_);
  if (g.is_one()) {
    LaurentPoly n = num_ * o.den_ + o.num_ * den_;
    LaurentPoly d = den_ * o.den_;
    num_ = std::move(n);
    den_ = std::move(d);
    return *this;
  }
  LaurentPoly b1 = exact_quotient(den_, g);
  LaurentPoly d1 = exact_quotient(o.den_, g);
  LaurentPoly n = num_ * d1 + o.num_ * b1;
  LaurentPoly d = den_ * d1;
  return *this = normalize(std::move(n), std::move(d));
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (is_zero()) return *this;
  if (o.is_zero()) return *this = Scalar();
  if (den_.is_one() && o.den_.is_one()) {
    num_ *= o.num_;
    return *this;
  }
  // A monomial numerator shares no factor with a denominator of valuation 0.
  if (o.den_.is_one() && o.num_.is_monomial()) {
    num_ *= o.num_;
    return *this;
  }
  if (den_.is_one() && num_.is_monomial()) {
    LaurentPoly n = num_ * o.num_;
    num_ = std::move(n);
    den_ = o.den_;
    return *this;
  }
  // Cross cancellation keeps the result reduced.
  LaurentPoly a = num_, b = den_, c = o.num_, d = o.den_;
  if (!d.is_one() && !a.is_monomial()) {
    LaurentPoly g = poly_gcd(a, d);
    if (!g.is_one()) {
      a = exact_quotient(a, g);
      d = exact_quotient(d, g);
    }
  }
  if (!b.is_one() && !c.is_monomial()) {
    LaurentPoly g = poly_gcd(c, b);
    if (!g.is_one()) {
      c = exact_quotient(c, g);
      b = exact_quotient(b, g);
    }
  }
  LaurentPoly n = a * c;
  LaurentPoly den = b * d;
  const Rational lc = den.leading();
  if (lc != 1) {
    n = n.scaled(1 / lc);
    den = den.scaled(1 / lc);
  }
  num_ = std::move(n);
  den_ = std::move(den);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

Rational Scalar::evaluate(const Rational& s) const {
  const Rational d = den_.evaluate(s);
  if (d == 0) throw DivisionByZero();
  return num_.evaluate(s) / d;
}

std::string Scalar::to_string() const {
  if (den_.is_one()) return num_.to_string();
  const std::string n = num_.to_string();
  const std::string d = den_.to_string();
  const std::string ns = num_.term_count() > 1 ? "(" + n + ")" : n;
  const std::string ds = den_.term_count() > 1 ? "(" + d + ")" : d;
  return ns + "/" + ds;
}

Rational limit_q1(const Scalar& x) {
  const Rational d = x.denominator().at_one();
  if (d == 0) throw PoleAtOne();
  return x.numerator().at_one() / d;
}

bool equals(const Scalar& a, const Scalar& b) { return (a - b).is_zero(); }

Scalar pow(const Scalar& x, int e) {
  if (e < 0) return pow(x.inverse(), -e);
  Scalar result(1L), base = x;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

std::string factor_string(const Scalar& x) {
  if (x.is_polynomial() && x.numerator().term_count() <= 1) return x.to_string();
  return "(" + x.to_string() + ")";
}

std::string format_sum(const std::vector<std::pair<Scalar, std::string>>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [c, body] : terms) {
    Scalar coeff = c;
    bool negative = false;
    if (coeff.is_polynomial() && coeff.numerator().term_count() == 1 && coeff.numerator().leading() < 0) {
      negative = true;
      coeff = -coeff;
    }
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    if (body.empty())
      out += factor_string(coeff);
    else if (coeff.is_one())
      out += body;
    else
      out += factor_string(coeff) + "*" + body;
  }
  return out;
}

}  // namespace esq
