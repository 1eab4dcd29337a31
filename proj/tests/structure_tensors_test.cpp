#include "doctest.h"
#include "esq/error.hpp"
#include "esq/structure_tensors.hpp"

using namespace esq;

TEST_CASE("dimension range") {
  CHECK_THROWS_AS(structure(2), InvalidDimension);
  CHECK_THROWS_AS(structure(16), InvalidDimension);
  CHECK_NOTHROW(check_dimension(3));
}

TEST_CASE("metric at N = 3") {
  const Metric& c = structure(3).C;
  CHECK(c.at(1, 3) == Scalar::s_power(-1));
  CHECK(c.at(2, 2) == Scalar(1L));
  CHECK(c.at(3, 1) == Scalar::s_power(1));
  CHECK(c.at(1, 1).is_zero());
  CHECK(c.entries().size() == 3);
  CHECK(two_rho(1, 3) == 1);
  CHECK(two_rho(2, 3) == 0);
  CHECK(two_rho(3, 3) == -1);
}

TEST_CASE("K is the metric tensor square") {
  for (int n = 3; n <= 5; ++n) {
    const StructureTensors& st = structure(n);
    for (int k = 1; k <= n; ++k)
      for (int l = 1; l <= n; ++l)
        for (int i = 1; i <= n; ++i)
          for (int j = 1; j <= n; ++j) CHECK(st.K.at(k, l, i, j) == st.C.at(k, l) * st.C.at(i, j));
  }
}

TEST_CASE("Rhat satisfies its cubic minimal polynomial") {
  for (int n = 3; n <= 6; ++n) {
    const StructureTensors& st = structure(n);
    const FourTensor id = FourTensor::identity(n);
    const Scalar q = Scalar::q();
    const FourTensor a = st.R - id.scaled(q);
    const FourTensor b = st.R + id.scaled(q.inverse());
    const FourTensor c = st.R - id.scaled(Scalar::q_power(1 - n));
    CHECK(a.compose(b).compose(c).nonzero_count() == 0);
    CHECK(a.compose(b).nonzero_count() != 0);
  }
}

TEST_CASE("Rhat tends to the flip at q = 1") {
  for (int n = 3; n <= 5; ++n) {
    const StructureTensors& st = structure(n);
    for (int k = 1; k <= n; ++k)
      for (int l = 1; l <= n; ++l)
        for (int i = 1; i <= n; ++i)
          for (int j = 1; j <= n; ++j) {
            const int flip = kronecker(k, j) * kronecker(l, i);
            CHECK(limit_q1(st.R.at(k, l, i, j)) == flip);
            CHECK(limit_q1(st.Rinv.at(k, l, i, j)) == flip);
          }
  }
}

TEST_CASE("tensor identities") {
  for (int n = 3; n <= 6; ++n) {
    const StructureTensors& st = structure(n);
    const FourTensor id = FourTensor::identity(n);
    const Scalar q = Scalar::q();
    CHECK(st.R.compose(st.Rinv) == id);
    CHECK(st.R - st.Rinv == (id - st.K).scaled(q - q.inverse()));
    CHECK(st.K.compose(st.K) == st.K.scaled(st.tau));
    CHECK(braid_relation_holds(st.R));
  }
}

TEST_CASE("perturbed Rhat violates the braid relation") {
  const StructureTensors& st = structure(3);
  FourTensor r = st.R;
  r.add(1, 2, 1, 2, Scalar(1L));
  CHECK_FALSE(braid_relation_holds(r));
}

TEST_CASE("spectral projectors") {
  for (int n = 3; n <= 5; ++n) {
    const Spectrum sp = spectral_projectors(n);
    const FourTensor id = FourTensor::identity(n);
    CHECK(sp.P_plus + sp.P_minus + sp.P_zero == id);
    CHECK(sp.P_plus.compose(sp.P_plus) == sp.P_plus);
    CHECK(sp.P_minus.compose(sp.P_plus).nonzero_count() == 0);
    CHECK(sp.P_zero == structure(n).K.scaled(structure(n).tau.inverse()));
    CHECK(sp.minimal_polynomial.size() == 4);
    CHECK(sp.P_minus.trace() == Scalar(static_cast<long>(n * (n - 1) / 2)));
  }
}

TEST_CASE("tensor lookup by kind") {
  const auto c = build_structure_tensor(TensorKind::C, 4);
  CHECK(std::holds_alternative<Metric>(c));
  const auto r = build_structure_tensor(TensorKind::RhatInv, 4);
  REQUIRE(std::holds_alternative<FourTensor>(r));
  CHECK(std::get<FourTensor>(r) == structure(4).Rinv);
}

TEST_CASE("apply_pair acts on the chosen slots") {
  const StructureTensors& st = structure(3);
  const TripleVector v = {{{1, 2, 3}, Scalar(1L)}};
  const TripleVector w = apply_pair(st.I, 0, v);
  CHECK(w == v);
  const TripleVector k = apply_pair(st.K, 1, {{{1, 1, 3}, Scalar(1L)}});
  for (const auto& [idx, c] : k) {
    CHECK(idx[0] == 1);
    CHECK(idx[1] + idx[2] == 4);
  }
}
