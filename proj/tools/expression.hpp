#pragma once

// Expression language of the command line tool.
//
//   sum     := term (('+' | '-') term)*
//   term    := product (('(x)' | '^') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ['^' exponent]
//   primary := INT | 'q' | x INT | dx INT | g+ INT | g- INT | g INT
//            | 'theta' | 'sphere' | '(' sum ')'
//
// Indices may carry an underscore (x_1, g+_2), so printed forms parse back.
// '^' after a primary is an exponent when followed by an integer, a negative
// integer or a parenthesised fraction; otherwise it is the wedge product.

#include <memory>
#include <optional>
#include <string>

#include "esq/first_order.hpp"
#include "esq/higher_order.hpp"
#include "esq/wedge.hpp"

namespace esq::cli {

struct Node {
  enum class Kind { number, q, generator, form, theta, sphere, neg, add, sub, mul, div, power, tensor, wedge };
  Kind kind = Kind::number;
  Rational number;
  int index = 0;
  Basis basis = Basis::dx;
  // Exponent in units of 1/2 for power nodes.
  int half_exponent = 0;
  std::shared_ptr<Node> lhs;
  std::shared_ptr<Node> rhs;
};

using Expression = std::shared_ptr<Node>;

/// Throws ParseError with the offending position, IndexOutOfRange for
/// indices outside 1..n.
Expression parse(const std::string& input, int n);

struct Value {
  enum class Kind { scalar, algebra, one_form, two_tensor, wedge };
  Kind kind = Kind::scalar;
  Scalar scalar;
  AlgebraElement algebra;
  OneForm one_form;
  TwoTensor two_tensor;
  WedgeForm wedge;
};

std::string to_string(Value::Kind k);

/// Evaluates expressions in one calculus; the algebra and the calculi are
/// built on first use.  Tensor and wedge products need Gamma+.
class Evaluator {
 public:
  Evaluator(int n, Sign sign);
  ~Evaluator();

  int dimension() const { return n_; }
  Sign sign() const { return sign_; }

  Value evaluate(const Expression& e);
  /// Normal form in the value's own representation; wedge values are
  /// brought to increasing index sequences.
  Value reduce(const Value& v);
  /// Brings any value of grade <= 1 or a wedge to a reduced wedge form.
  WedgeForm wedge_normal(const Value& v);
  std::string print(const Value& v) const;

  const SphereAlgebra& algebra();
  const FirstOrderCalculus& calculus();
  const TensorCalculus& tensors();
  const WedgeCalculus& wedges();

 private:
  int n_;
  Sign sign_;
  std::unique_ptr<SphereAlgebra> x_;
  std::unique_ptr<FirstOrderCalculus> g_;
  std::unique_ptr<TensorCalculus> tc_;
  std::unique_ptr<WedgeCalculus> wc_;

  Value add(Value a, Value b, bool subtract);
  Value multiply(const Value& a, const Value& b);
  Value tensor(const Value& a, const Value& b);
  Value wedge(const Value& a, const Value& b);
  WedgeForm as_wedge(const Value& v);
  Value promote_scalar(const Value& v);
};

}  // namespace esq::cli
