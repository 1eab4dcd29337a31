#include "doctest.h"
#include "esq/classification.hpp"
#include "esq/error.hpp"
#include "esq/first_order.hpp"
#include "esq/limits.hpp"

using namespace esq;

TEST_CASE("coefficients at N = 3") {
  const Scalar q = Scalar::q();
  const auto plus = calculus_coefficients(Sign::plus, 3);
  CHECK(plus[0] == Scalar(1L));
  CHECK(plus[1] == q - 1);
  CHECK(plus[2] == -q);
  CHECK(plus[3] == Scalar(1L));
  const auto minus = calculus_coefficients(Sign::minus, 3);
  CHECK(minus[0] == Scalar(-1L));
  CHECK(minus[1] == -q - 1);
  CHECK(minus[2] == (q * q * q - q) / (1 + q * q));
}

TEST_CASE("compatibility conditions vanish for both calculi") {
  for (int n = 3; n <= 4; ++n) {
    const SphereAlgebra x(n);
    for (Sign s : {Sign::plus, Sign::minus}) {
      const FirstOrderCalculus g(x, s);
      CHECK(build_conditions(x, g.rules(Basis::dx)).all_zero());
      CHECK(g.differentiate(x.sphere_element()).is_zero());
    }
  }
}

TEST_CASE("a perturbed coefficient breaks the conditions") {
  const SphereAlgebra x(3);
  auto a = calculus_coefficients(Sign::plus, 3);
  a[2] += Scalar(1L);
  CHECK_FALSE(build_conditions(x, ansatz_rules<Scalar>(x, a[0], a[1], a[2], a[3])).all_zero());
}

TEST_CASE("one-form printing and basis changes") {
  const SphereAlgebra x(3);
  const FirstOrderCalculus g(x, Sign::plus);
  const OneForm f = g.left_mult(generator(1), g.basis_form(Basis::dx, 2));
  CHECK(to_string(f) == "x_1*dx_2");
  CHECK(to_string(g.basis_form(Basis::gamma_minus, 3)) == "g-_3");
  for (Basis b : {Basis::gamma_plus, Basis::gamma_minus}) CHECK(g.convert(g.convert(f, b), Basis::dx) == f);
  CHECK(g.theta() == g.convert(g.convert(g.theta(), Basis::gamma_plus), Basis::dx));
}

TEST_CASE("gamma bases carry the Rhat rules") {
  const SphereAlgebra x(4);
  const StructureTensors& st = x.tensors();
  for (Sign s : {Sign::plus, Sign::minus}) {
    const FirstOrderCalculus g(x, s);
    const Scalar e = s == Sign::plus ? Scalar(1L) : Scalar(-1L);
    for (int i = 1; i <= 4; ++i)
      for (int j = 1; j <= 4; ++j) {
        Form<Scalar> expect;
        for (const auto& t : st.R.column(i, j)) expect.add(FormKey{Word::letter(t.k), t.l}, e * t.value);
        CHECK(g.rules(Basis::gamma_plus).as_form(i, j) == expect);
      }
  }
}

TEST_CASE("inner calculus") {
  const SphereAlgebra x(3);
  for (Sign s : {Sign::plus, Sign::minus}) {
    const FirstOrderCalculus g(x, s);
    OneForm tp = g.theta();
    tp.terms *= g.theta_prime_factor();
    const AlgebraElement a = x.normal_form(Word::from_letters({1, 2, 2}));
    OneForm d = g.right_mult(tp, a);
    d.terms -= g.left_mult(a, tp).terms;
    CHECK(d == g.differentiate(a));
  }
}

TEST_CASE("right module form round trip and star") {
  const SphereAlgebra x(3);
  const FirstOrderCalculus g(x, Sign::minus);
  const OneForm f = g.left_mult(x.normal_form(Word::from_letters({3, 1})), g.basis_form(Basis::dx, 2));
  CHECK(g.to_left_module(g.to_right_module(f)) == f);
  CHECK(g.star(g.star(f)) == f);
  CHECK(g.star(g.basis_form(Basis::dx, 1)) == g.differentiate(x.star(generator(1))));
}

TEST_CASE("classification at N = 3") {
  const ClassificationResult r = classify(Constraint::free, 3);
  CHECK_FALSE(r.basis_complete);
  CHECK(r.a2_relation_expected);
  REQUIRE(r.solutions.size() == 2);
  for (const auto& s : r.solutions) {
    const bool plus = s[0] == Scalar(1L);
    const auto expect = calculus_coefficients(plus ? Sign::plus : Sign::minus, 3);
    for (std::size_t k = 0; k < 4; ++k) CHECK(s[k] == expect[k]);
  }
  const ClassificationResult z = classify(Constraint::theta_zero, 3);
  CHECK_FALSE(z.solvable);
  CHECK(z.witnesses_found);
  CHECK(z.a1_polynomial.is_constant());
}

TEST_CASE("classical limits") {
  for (int n = 3; n <= 6; ++n)
    for (Sign s : {Sign::plus, Sign::minus}) {
      const ClassicalLimit l = classical_limit_table(s, n);
      CHECK(l.a == expected_classical_coefficients(s, n));
      CHECK(l.theta_commutator == expected_theta_commutator_limit(s));
      CHECK(l.tensors_classical);
      CHECK(l.noncommutative);
    }
  CHECK(expected_theta_commutator_limit(Sign::plus) == 0);
  CHECK(expected_theta_commutator_limit(Sign::minus) == -2);
  CHECK(expected_classical_coefficients(Sign::plus, 5)[2] == Rational(-1, 2));
}
