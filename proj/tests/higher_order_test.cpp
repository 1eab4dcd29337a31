#include "doctest.h"
#include "esq/error.hpp"
#include "esq/higher_order.hpp"

using namespace esq;

namespace {

struct Fixture {
  SphereAlgebra x{3};
  FirstOrderCalculus g{x, Sign::plus};
  TensorCalculus tc{g};
};

}  // namespace

TEST_CASE("tensor calculus needs Gamma+") {
  const SphereAlgebra x(3);
  const FirstOrderCalculus g(x, Sign::minus);
  CHECK_THROWS_AS(TensorCalculus{g}, InvalidParameter);
}

TEST_CASE("sigma") {
  Fixture f;
  const Scalar q = Scalar::q();
  CHECK(braid_check(q, 3));
  CHECK(braid_check(Scalar(2L) * q + 1, 3));
  CHECK(sigma_bimodule_check(f.tc, q, Basis::gamma_plus));
  CHECK(sigma_bimodule_check(f.tc, q, Basis::gamma_minus));
  CHECK(sigma_basis_independence_check(f.tc, q));
  const TwoTensor p = f.tc.basis_pair(Basis::gamma_plus, 1, 3);
  CHECK(f.tc.sigma(f.tc.sigma_inverse(p, q), q) == p);
  // On basis pairs sigma is alpha Rinv.
  TwoTensor expect = f.tc.zero(Basis::gamma_plus);
  for (const auto& e : structure(3).Rinv.column(1, 3)) expect += (q * e.value) * f.tc.basis_pair(Basis::gamma_plus, e.k, e.l);
  CHECK(f.tc.sigma(p, q) == expect);
}

TEST_CASE("id - sigma kills [I] and [II] only at alpha = q") {
  Fixture f;
  CHECK(annihilation_check(f.tc, Scalar::q()));
  CHECK_FALSE(annihilation_check(f.tc, Scalar(1L)));
  CHECK_FALSE(annihilation_check(f.tc, Scalar::q_power(2)));
  CHECK_FALSE(annihilation_check(f.tc, Scalar::q(), true));
}

TEST_CASE("routed and direct right multiplication agree") {
  Fixture f;
  const TwoTensor t = relation_r(f.tc, 1, 2);
  const AlgebraElement a = f.x.normal_form(Word::from_letters({2, 3}));
  CHECK(f.tc.right_mult(t, a) == f.tc.right_mult_direct(t, a));
  const TwoTensor d = f.tc.d_theta();
  CHECK(f.tc.convert(f.tc.convert(d, Basis::gamma_minus), Basis::dx) == d);
}

TEST_CASE("[II] in the gamma- basis") {
  Fixture f;
  CHECK(f.tc.convert(relation_ii(f.tc), Basis::gamma_minus) == relation_ii_gamma_display(f.tc));
}

TEST_CASE("second order relations at N = 3") {
  Fixture f;
  const SecondOrderRelations s = build_second_order_relations(f.tc);
  CHECK(s.ok());
  CHECK(s.leibniz_matches_display);
  CHECK(s.r_in_leibniz_span);
  CHECK_FALSE(s.r_printed_in_leibniz_span);
  CHECK(s.contraction_gives_ii);
  CHECK(s.ratios_forced);
  CHECK(s.predicted_consistent);
  CHECK(s.s_nonzero);
  CHECK(s.factorization_holds);
  const Scalar q = Scalar::q();
  CHECK(s.T == second_order_t(3));
  CHECK(s.T == 2 * q / ((1 - q) * (1 - q)));
  for (std::size_t m = 0; m < 4; ++m) CHECK(s.A[m + 4] == s.T * s.A[m]);
  CHECK(s.A[6] == q * s.A[7]);
  CHECK(s.A[6] == predicted_a7(3));
}
