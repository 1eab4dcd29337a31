#include "expression.hpp"

#include <cctype>
#include <utility>
#include <vector>

#include "esq/error.hpp"

namespace esq::cli {

namespace {

enum class Tok { number, q, generator, form, theta, sphere, plus, minus, star, slash, caret, tensor, lparen, rparen, end };

struct Token {
  Tok kind;
  std::size_t pos;
  Rational number;
  int index = 0;
  Basis basis = Basis::dx;
};

class Lexer {
 public:
  Lexer(const std::string& s, int n) : s_(s), n_(n) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      const std::size_t start = i_;
      if (i_ >= s_.size()) {
        out.push_back({Tok::end, start, {}});
        return out;
      }
      const char c = s_[i_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back({Tok::number, start, Rational(read_digits())});
      } else if (s_.compare(i_, 3, "(x)") == 0) {
        i_ += 3;
        out.push_back({Tok::tensor, start, {}});
      } else if (s_.compare(i_, 5, "theta") == 0) {
        i_ += 5;
        out.push_back({Tok::theta, start, {}});
      } else if (s_.compare(i_, 6, "sphere") == 0) {
        i_ += 6;
        out.push_back({Tok::sphere, start, {}});
      } else if (c == 'q') {
        ++i_;
        out.push_back({Tok::q, start, {}});
      } else if (c == 'x') {
        ++i_;
        out.push_back(indexed(Tok::generator, Basis::dx, start));
      } else if (s_.compare(i_, 2, "dx") == 0) {
        i_ += 2;
        out.push_back(indexed(Tok::form, Basis::dx, start));
      } else if (c == 'g') {
        ++i_;
        Basis b = Basis::gamma_plus;
        if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) {
          b = s_[i_] == '+' ? Basis::gamma_plus : Basis::gamma_minus;
          ++i_;
        }
        out.push_back(indexed(Tok::form, b, start));
      } else {
        Tok t;
        switch (c) {
          case '+': t = Tok::plus; break;
          case '-': t = Tok::minus; break;
          case '*': t = Tok::star; break;
          case '/': t = Tok::slash; break;
          case '^': t = Tok::caret; break;
          case '(': t = Tok::lparen; break;
          case ')': t = Tok::rparen; break;
          default: throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
        ++i_;
        out.push_back({t, start, {}});
      }
    }
  }

 private:
  const std::string& s_;
  int n_;
  std::size_t i_ = 0;

  void skip_space() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  std::string read_digits() {
    const std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    return s_.substr(start, i_ - start);
  }

  Token indexed(Tok kind, Basis basis, std::size_t start) {
    if (i_ < s_.size() && s_[i_] == '_') ++i_;
    if (i_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[i_]))) throw ParseError("expected an index", i_);
    const int index = std::stoi(read_digits());
    if (index < 1 || index > n_) throw IndexOutOfRange(index, n_);
    Token t{kind, start, {}};
    t.index = index;
    t.basis = basis;
    return t;
  }
};

Expression make(Node::Kind kind, Expression lhs = nullptr, Expression rhs = nullptr) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  Expression run() {
    Expression e = sum();
    if (peek().kind != Tok::end) throw ParseError("unexpected token", peek().pos);
    return e;
  }

 private:
  std::vector<Token> t_;
  std::size_t p_ = 0;

  const Token& peek(std::size_t ahead = 0) const { return t_[std::min(p_ + ahead, t_.size() - 1)]; }
  const Token& next() { return t_[p_++]; }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) throw ParseError(std::string("expected ") + what, peek().pos);
    ++p_;
  }

  Expression sum() {
    Expression e = term();
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      const bool minus = next().kind == Tok::minus;
      e = make(minus ? Node::Kind::sub : Node::Kind::add, e, term());
    }
    return e;
  }

  Expression term() {
    Expression e = product();
    while (peek().kind == Tok::tensor || peek().kind == Tok::caret) {
      const bool tensor = next().kind == Tok::tensor;
      e = make(tensor ? Node::Kind::tensor : Node::Kind::wedge, e, product());
    }
    return e;
  }

  Expression product() {
    Expression e = unary();
    while (peek().kind == Tok::star || peek().kind == Tok::slash) {
      const bool div = next().kind == Tok::slash;
      e = make(div ? Node::Kind::div : Node::Kind::mul, e, unary());
    }
    return e;
  }

  Expression unary() {
    if (peek().kind == Tok::minus) {
      ++p_;
      return make(Node::Kind::neg, unary());
    }
    return power();
  }

  // Exponent forms: INT, -INT, (INT), (-INT), (INT/INT), (-INT/INT).
  bool exponent_ahead() const {
    if (peek().kind != Tok::caret) return false;
    const Tok a = peek(1).kind;
    if (a == Tok::number) return true;
    if (a == Tok::minus) return peek(2).kind == Tok::number;
    if (a != Tok::lparen) return false;
    std::size_t k = 2;
    if (peek(k).kind == Tok::minus) ++k;
    return peek(k).kind == Tok::number;
  }

  int exponent() {
    ++p_;  // '^'
    const bool paren = peek().kind == Tok::lparen;
    if (paren) ++p_;
    bool negative = false;
    if (peek().kind == Tok::minus) {
      negative = true;
      ++p_;
    }
    const Token& num = next();
    Rational value = num.number;
    if (paren && peek().kind == Tok::slash) {
      ++p_;
      const Token& den = next();
      if (den.kind != Tok::number || den.number == 0) throw ParseError("expected a denominator", den.pos);
      value /= den.number;
    }
    if (paren) expect(Tok::rparen, "')'");
    value *= 2;
    if (value.get_den() != 1 || !value.get_num().fits_sint_p()) throw ParseError("exponent must be a multiple of 1/2", num.pos);
    const int half = static_cast<int>(value.get_num().get_si());
    return negative ? -half : half;
  }

  Expression power() {
    Expression e = primary();
    if (exponent_ahead()) {
      const std::size_t pos = peek().pos;
      auto node = make(Node::Kind::power, e);
      node->half_exponent = exponent();
      if (node->half_exponent % 2 != 0 && e->kind != Node::Kind::q)
        throw ParseError("half-integer exponents apply to q only", pos);
      return node;
    }
    return e;
  }

  Expression primary() {
    const Token& t = next();
    switch (t.kind) {
      case Tok::number: {
        auto node = make(Node::Kind::number);
        node->number = t.number;
        return node;
      }
      case Tok::q:
        return make(Node::Kind::q);
      case Tok::generator:
      case Tok::form: {
        auto node = make(t.kind == Tok::generator ? Node::Kind::generator : Node::Kind::form);
        node->index = t.index;
        node->basis = t.basis;
        return node;
      }
      case Tok::theta:
        return make(Node::Kind::theta);
      case Tok::sphere:
        return make(Node::Kind::sphere);
      case Tok::lparen: {
        Expression e = sum();
        expect(Tok::rparen, "')'");
        return e;
      }
      default:
        throw ParseError("expected an operand", t.pos);
    }
  }
};

}  // namespace

Expression parse(const std::string& input, int n) {
  check_dimension(n);
  return Parser(Lexer(input, n).run()).run();
}

std::string to_string(Value::Kind k) {
  switch (k) {
    case Value::Kind::scalar: return "scalar";
    case Value::Kind::algebra: return "algebra element";
    case Value::Kind::one_form: return "one-form";
    case Value::Kind::two_tensor: return "two-tensor";
    case Value::Kind::wedge: return "wedge form";
  }
  return "value";
}

Evaluator::Evaluator(int n, Sign sign) : n_(n), sign_(sign) { check_dimension(n); }

Evaluator::~Evaluator() = default;

const SphereAlgebra& Evaluator::algebra() {
  if (!x_) x_ = std::make_unique<SphereAlgebra>(n_);
  return *x_;
}

const FirstOrderCalculus& Evaluator::calculus() {
  if (!g_) g_ = std::make_unique<FirstOrderCalculus>(algebra(), sign_);
  return *g_;
}

const TensorCalculus& Evaluator::tensors() {
  if (sign_ != Sign::plus) throw InvalidParameter("tensor products are defined over Gamma+ only");
  if (!tc_) tc_ = std::make_unique<TensorCalculus>(calculus());
  return *tc_;
}

const WedgeCalculus& Evaluator::wedges() {
  if (sign_ != Sign::plus) throw InvalidParameter("wedge products are defined over Gamma+ only");
  if (!wc_) wc_ = std::make_unique<WedgeCalculus>(calculus());
  return *wc_;
}

Value Evaluator::promote_scalar(const Value& v) {
  if (v.kind != Value::Kind::scalar) return v;
  Value out;
  out.kind = Value::Kind::algebra;
  out.algebra = AlgebraElement(Word(), v.scalar);
  return out;
}

Value Evaluator::evaluate(const Expression& e) {
  Value v;
  switch (e->kind) {
    case Node::Kind::number:
      v.scalar = Scalar(e->number);
      return v;
    case Node::Kind::q:
      v.scalar = Scalar::q();
      return v;
    case Node::Kind::generator:
      v.kind = Value::Kind::algebra;
      v.algebra = generator(e->index);
      return v;
    case Node::Kind::form:
      v.kind = Value::Kind::one_form;
      v.one_form = calculus().basis_form(e->basis, e->index);
      return v;
    case Node::Kind::theta:
      v.kind = Value::Kind::one_form;
      v.one_form = calculus().theta();
      return v;
    case Node::Kind::sphere:
      v.kind = Value::Kind::algebra;
      v.algebra = algebra().sphere_element();
      return v;
    case Node::Kind::neg: {
      Value m;
      m.scalar = Scalar(-1L);
      return multiply(m, evaluate(e->lhs));
    }
    case Node::Kind::add:
      return add(evaluate(e->lhs), evaluate(e->rhs), false);
    case Node::Kind::sub:
      return add(evaluate(e->lhs), evaluate(e->rhs), true);
    case Node::Kind::mul:
      return multiply(evaluate(e->lhs), evaluate(e->rhs));
    case Node::Kind::div: {
      const Value d = evaluate(e->rhs);
      if (d.kind != Value::Kind::scalar) throw InvalidParameter("division by a non-scalar");
      if (d.scalar.is_zero()) throw DivisionByZero();
      Value inv;
      inv.scalar = d.scalar.inverse();
      return multiply(evaluate(e->lhs), inv);
    }
    case Node::Kind::power: {
      const Value base = evaluate(e->lhs);
      if (e->lhs->kind == Node::Kind::q) {
        v.scalar = Scalar::s_power(e->half_exponent);
        return v;
      }
      const int k = e->half_exponent / 2;
      if (base.kind == Value::Kind::scalar) {
        v.scalar = pow(base.scalar, k);
        return v;
      }
      if (base.kind != Value::Kind::algebra || k < 0) throw InvalidParameter("powers apply to scalars and algebra elements");
      v.kind = Value::Kind::algebra;
      v.algebra = AlgebraElement(Word(), Scalar(1L));
      for (int i = 0; i < k; ++i) v.algebra = algebra().multiply(v.algebra, base.algebra);
      return v;
    }
    case Node::Kind::tensor:
      return tensor(evaluate(e->lhs), evaluate(e->rhs));
    case Node::Kind::wedge:
      return wedge(evaluate(e->lhs), evaluate(e->rhs));
  }
  return v;
}

Value Evaluator::add(Value a, Value b, bool subtract) {
  if (a.kind == Value::Kind::scalar && b.kind == Value::Kind::scalar) {
    a.scalar = subtract ? a.scalar - b.scalar : a.scalar + b.scalar;
    return a;
  }
  a = promote_scalar(a);
  b = promote_scalar(b);
  if (a.kind == Value::Kind::wedge || b.kind == Value::Kind::wedge) {
    WedgeForm wa = as_wedge(a);
    const WedgeForm wb = as_wedge(b);
    if (subtract) wa -= wb;
    else wa += wb;
    Value out;
    out.kind = Value::Kind::wedge;
    out.wedge = std::move(wa);
    return out;
  }
  if (a.kind != b.kind) throw InvalidParameter("cannot add a " + to_string(a.kind) + " and a " + to_string(b.kind));
  switch (a.kind) {
    case Value::Kind::algebra:
      if (subtract) a.algebra -= b.algebra;
      else a.algebra += b.algebra;
      break;
    case Value::Kind::one_form: {
      const OneForm bb = calculus().convert(b.one_form, a.one_form.basis);
      if (subtract) a.one_form.terms -= bb.terms;
      else a.one_form.terms += bb.terms;
      break;
    }
    case Value::Kind::two_tensor: {
      const TwoTensor bb = tensors().convert(b.two_tensor, a.two_tensor.basis);
      if (subtract) a.two_tensor -= bb;
      else a.two_tensor += bb;
      break;
    }
    default:
      break;
  }
  return a;
}

Value Evaluator::multiply(const Value& a, const Value& b) {
  if (a.kind == Value::Kind::scalar || b.kind == Value::Kind::scalar) {
    const bool left = a.kind == Value::Kind::scalar;
    const Scalar& c = left ? a.scalar : b.scalar;
    Value out = left ? b : a;
    switch (out.kind) {
      case Value::Kind::scalar: out.scalar = a.scalar * b.scalar; break;
      case Value::Kind::algebra: out.algebra *= c; break;
      case Value::Kind::one_form: out.one_form.terms *= c; break;
      case Value::Kind::two_tensor: out.two_tensor *= c; break;
      case Value::Kind::wedge: out.wedge *= c; break;
    }
    return out;
  }
  Value out;
  if (a.kind == Value::Kind::algebra) {
    out = b;
    switch (b.kind) {
      case Value::Kind::algebra: out.algebra = algebra().multiply(a.algebra, b.algebra); break;
      case Value::Kind::one_form: out.one_form = calculus().left_mult(a.algebra, b.one_form); break;
      case Value::Kind::two_tensor: out.two_tensor = tensors().left_mult(a.algebra, b.two_tensor); break;
      case Value::Kind::wedge: out.wedge = wedges().product(as_wedge(a), b.wedge); break;
      default: break;
    }
    return out;
  }
  if (b.kind != Value::Kind::algebra)
    throw InvalidParameter("'*' between a " + to_string(a.kind) + " and a " + to_string(b.kind) + "; use (x) or ^");
  out = a;
  switch (a.kind) {
    case Value::Kind::one_form: out.one_form = calculus().right_mult(a.one_form, b.algebra); break;
    case Value::Kind::two_tensor: out.two_tensor = tensors().right_mult(a.two_tensor, b.algebra); break;
    case Value::Kind::wedge: out.wedge = wedges().right_mult(a.wedge, b.algebra); break;
    default: break;
  }
  return out;
}

Value Evaluator::tensor(const Value& a, const Value& b) {
  if (a.kind != Value::Kind::one_form || b.kind != Value::Kind::one_form)
    throw InvalidParameter("(x) takes two one-forms");
  Value out;
  out.kind = Value::Kind::two_tensor;
  out.two_tensor = tensors().tensor(a.one_form, b.one_form);
  return out;
}

WedgeForm Evaluator::as_wedge(const Value& v) {
  WedgeForm w;
  switch (v.kind) {
    case Value::Kind::scalar:
      w.add(WedgeKey{Word(), Word()}, v.scalar);
      break;
    case Value::Kind::algebra:
      for (const auto& [word, c] : algebra().normal_form(v.algebra)) w.add(WedgeKey{word, Word()}, c);
      break;
    case Value::Kind::one_form:
      for (const auto& [key, c] : calculus().convert(v.one_form, Basis::gamma_plus).terms)
        w.add(WedgeKey{key.word, Word::letter(key.index)}, c);
      break;
    case Value::Kind::two_tensor:
      for (const auto& [key, c] : tensors().convert(v.two_tensor, Basis::gamma_plus).terms)
        w.add(WedgeKey{key.word, Word::from_letters({key.i, key.j})}, c);
      break;
    case Value::Kind::wedge:
      w = v.wedge;
      break;
  }
  return w;
}

Value Evaluator::wedge(const Value& a, const Value& b) {
  Value out;
  out.kind = Value::Kind::wedge;
  out.wedge = wedges().product(as_wedge(a), as_wedge(b));
  return out;
}

WedgeForm Evaluator::wedge_normal(const Value& v) { return wedges().normal_form(as_wedge(v)); }

Value Evaluator::reduce(const Value& v) {
  Value out = v;
  switch (v.kind) {
    case Value::Kind::scalar:
      break;
    case Value::Kind::algebra:
      out.algebra = algebra().normal_form(v.algebra);
      break;
    case Value::Kind::one_form:
    case Value::Kind::two_tensor:
      // Kept normalised by every operation.
      break;
    case Value::Kind::wedge:
      out.wedge = wedges().normal_form(v.wedge);
      break;
  }
  return out;
}

std::string Evaluator::print(const Value& v) const {
  switch (v.kind) {
    case Value::Kind::scalar: return v.scalar.to_string();
    case Value::Kind::algebra: return to_string(v.algebra);
    case Value::Kind::one_form: return to_string(v.one_form);
    case Value::Kind::two_tensor: return to_string(v.two_tensor);
    case Value::Kind::wedge: return to_string(v.wedge);
  }
  return {};
}

}  // namespace esq::cli
