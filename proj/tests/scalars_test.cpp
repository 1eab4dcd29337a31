#include <random>

#include "doctest.h"
#include "esq/error.hpp"
#include "esq/scalar.hpp"

using namespace esq;

namespace {

Scalar random_scalar(std::mt19937& gen) {
  std::uniform_int_distribution<int> coeff(-4, 4), expo(-3, 3), len(1, 3);
  auto poly = [&] {
    std::map<int, Rational> t;
    const int k = len(gen);
    for (int i = 0; i < k; ++i) t[expo(gen)] += coeff(gen);
    return LaurentPoly::from_terms(t);
  };
  LaurentPoly den = poly();
  while (den.is_zero()) den = poly();
  return normalize(poly(), den);
}

}  // namespace

TEST_CASE("field operations agree with evaluation at rational points") {
  std::mt19937 gen(7);
  const std::vector<Rational> points = {Rational(2), Rational(-3, 5), Rational(7, 3)};
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    const Scalar a = random_scalar(gen), b = random_scalar(gen);
    for (const auto& s : points) {
      Rational va, vb;
      try {
        va = a.evaluate(s);
        vb = b.evaluate(s);
      } catch (const DivisionByZero&) {
        continue;
      }
      CHECK((a + b).evaluate(s) == va + vb);
      CHECK((a - b).evaluate(s) == va - vb);
      CHECK((a * b).evaluate(s) == va * vb);
      if (!b.is_zero() && vb != 0) CHECK((a / b).evaluate(s) == va / vb);
      ++checked;
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("canonical form makes equality structural") {
  const Scalar q = Scalar::q();
  CHECK((q * q - 1) / (q - 1) == q + 1);
  CHECK(Scalar::s_power(1) * Scalar::s_power(1) == q);
  CHECK(q.inverse() * q == Scalar(1L));
  CHECK(pow(q, -3) == Scalar::q_power(-3));
  CHECK(pow(q + 1, 2) == q * q + 2 * q + 1);
  const Scalar x = (q - 1) / (q * q - 1);
  CHECK(x.denominator() == (q + 1).numerator());
  CHECK(x.numerator().is_one());
}

TEST_CASE("printing") {
  const Scalar q = Scalar::q();
  CHECK(Scalar(0L).to_string() == "0");
  CHECK(q.to_string() == "q");
  CHECK(Scalar::q_power(-2).to_string() == "q^-2");
  CHECK(Scalar::s_power(1).to_string() == "q^(1/2)");
  CHECK(Scalar::s_power(-3).to_string() == "q^(-3/2)");
  CHECK((q - q.inverse()).to_string() == "q - q^-1");
  CHECK((Scalar(1L) / (q + 1)).to_string() == "1/(q + 1)");
  CHECK(rational_string(Rational(-2, 3)) == "-2/3");
}

TEST_CASE("errors and the q = 1 limit") {
  const Scalar q = Scalar::q();
  CHECK_THROWS_AS(Scalar(0L).inverse(), DivisionByZero);
  CHECK_THROWS_AS(Scalar(1L) / Scalar(0L), DivisionByZero);
  CHECK(limit_q1((q * q - 1) / (q - 1)) == 2);
  CHECK(limit_q1(Scalar::s_power(5)) == 1);
  CHECK_THROWS_AS(limit_q1(Scalar(1L) / (q - 1)), PoleAtOne);
}

TEST_CASE("polynomial gcd and exact division") {
  const LaurentPoly a = LaurentPoly::from_terms({{0, 1}, {4, -1}});
  const LaurentPoly b = LaurentPoly::from_terms({{0, 1}, {6, -1}});
  CHECK(poly_gcd(a, b) == LaurentPoly::from_terms({{0, -1}, {2, 1}}));
  const LaurentPoly p = LaurentPoly::from_terms({{0, 1}, {1, 2}, {2, 1}});
  LaurentPoly root;
  REQUIRE(poly_sqrt(p, root));
  CHECK(root * root == p);
  CHECK(exact_quotient(p, root) == root);
  CHECK_THROWS_AS(exact_quotient(p, a), Error);
}
