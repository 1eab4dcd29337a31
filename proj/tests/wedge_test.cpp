#include <random>

#include "doctest.h"
#include "esq/error.hpp"
#include "esq/wedge.hpp"

using namespace esq;

namespace {

bool increasing(const Word& w) {
  for (int p = 1; p < w.length(); ++p)
    if (w.at(p - 1) >= w.at(p)) return false;
  return true;
}

}  // namespace

TEST_CASE("diagonal pairs") {
  const SphereAlgebra x4(4);
  const FirstOrderCalculus g4(x4, Sign::plus);
  const WedgeCalculus w4(g4);
  for (int i = 1; i <= 4; ++i) CHECK(w4.normal_form(wedge_word({i, i})).is_zero());

  const SphereAlgebra x3(3);
  const FirstOrderCalculus g3(x3, Sign::plus);
  const WedgeCalculus w3(g3);
  const WedgeForm mid = w3.normal_form(wedge_word({2, 2}));
  CHECK(mid == wedge_word({1, 3}, Scalar::s_power(1) - Scalar::s_power(-1)));
  CHECK(w3.normal_form(wedge_word({2, 1})) == wedge_word({1, 2}, -Scalar::q()));
  CHECK(w3.normal_form(wedge_word({3, 1})) == wedge_word({1, 3}, Scalar(-1L)));
  CHECK(to_string(mid) == "(q^(1/2) - q^(-1/2))*g+_1^g+_3");
}

TEST_CASE("wedge calculus needs Gamma+") {
  const SphereAlgebra x(3);
  const FirstOrderCalculus g(x, Sign::minus);
  CHECK_THROWS_AS(WedgeCalculus{g}, InvalidParameter);
}

TEST_CASE("graded dimensions and the empty top grade") {
  for (int n = 3; n <= 4; ++n) {
    const SphereAlgebra x(n);
    const FirstOrderCalculus g(x, Sign::plus);
    const WedgeCalculus w(g);
    CHECK(w.pair_relation_rank() == n * (n + 1) / 2);
    long binom = 1;
    for (int s = 0; s <= n; ++s) {
      CHECK(w.graded_dimension(s) == binom);
      binom = binom * (n - s) / (s + 1);
    }
    CHECK(w.graded_dimension(n + 1) == 0);
  }
}

TEST_CASE("normal form on random forms of grade at most 3") {
  const SphereAlgebra x(4);
  const FirstOrderCalculus g(x, Sign::plus);
  const WedgeCalculus w(g);
  std::mt19937 gen(17);
  std::uniform_int_distribution<int> idx(1, 4), grade(1, 3), coeff(-3, 3), expo(-2, 2);
  for (int t = 0; t < 100; ++t) {
    WedgeForm f;
    for (int k = 0; k < 3; ++k) {
      std::vector<int> seq;
      for (int p = grade(gen); p > 0; --p) seq.push_back(idx(gen));
      f += wedge_word(seq, Scalar(static_cast<long>(coeff(gen))) * Scalar::s_power(expo(gen)));
    }
    const WedgeReduction r = w.reduce(f);
    CHECK(r.measure_decreased);
    for (const auto& [key, c] : r.result) CHECK(increasing(key.indices));
    CHECK(w.normal_form(r.result) == r.result);
  }
}

TEST_CASE("the measure") {
  const Word a = Word::from_letters({2, 1, 3});
  CHECK(measure_step_ok(a, Word::from_letters({1, 2, 3}), 0));
  CHECK_FALSE(measure_step_ok(Word::from_letters({1, 2, 3}), a, 0));
  CHECK_FALSE(measure_step_ok(a, Word::from_letters({1, 3, 2}), 0));
}

TEST_CASE("right multiplication keeps algebra coefficients in normal form") {
  const SphereAlgebra x(3);
  const FirstOrderCalculus g(x, Sign::plus);
  const WedgeCalculus w(g);
  const WedgeForm f = w.right_mult(wedge_word({1, 2}), generator(3));
  for (const auto& [key, c] : f) CHECK(x.is_normal_word(key.word));
  CHECK(w.product(wedge_word({1}), wedge_word({2})) == wedge_word({1, 2}));
}

TEST_CASE("d theta survives the sigma quotient") {
  const SphereAlgebra x(3);
  const FirstOrderCalculus g(x, Sign::plus);
  const WedgeCalculus w(g);
  const WedgeCheck c = check_wedge(w);
  CHECK(c.ok());
  CHECK(c.d_theta_nonzero);
  CHECK(c.d_theta_squared_nonzero);
  const SigmaQuotient s2(3, 2);
  CHECK(s2.dimension() == 4);
  CHECK_FALSE(s2.residual(w.d_theta()).empty());
}
