#include <random>

#include "doctest.h"
#include "esq/error.hpp"
#include "esq/sphere_algebra.hpp"

using namespace esq;

namespace {

AlgebraElement random_element(std::mt19937& gen, int n, int max_degree) {
  std::uniform_int_distribution<int> letter(1, n), len(0, max_degree), coeff(-3, 3);
  AlgebraElement e;
  for (int t = 0; t < 3; ++t) {
    std::vector<int> w;
    for (int k = len(gen); k > 0; --k) w.push_back(letter(gen));
    e.add(Word::from_letters(w), Scalar(static_cast<long>(coeff(gen))));
  }
  return e;
}

}  // namespace

TEST_CASE("graded dimensions match the flat classical count") {
  for (int n = 3; n <= 5; ++n) {
    const SphereAlgebra x(n);
    CHECK(x.confluent());
    for (int k = 0; k <= 4; ++k) CHECK(x.graded_dimension(k) == classical_dimension(n, k));
  }
  const SphereAlgebra x(3);
  const std::vector<long> expected = {1, 3, 5, 7, 9};
  for (int k = 0; k <= 4; ++k) CHECK(x.graded_dimension(k) == expected[static_cast<std::size_t>(k)]);
}

TEST_CASE("sphere relation and defining relations reduce to constants") {
  const SphereAlgebra x(4);
  CHECK(x.normal_form(x.sphere_element()) == AlgebraElement(Word(), Scalar(1L)));
  for (const auto& r : x.defining_relations()) CHECK(x.normal_form(r).is_zero());
}

TEST_CASE("x2 x1 at N = 3") {
  const SphereAlgebra x(3);
  CHECK(to_string(x.normal_form(Word::from_letters({2, 1}))) == "q^-1*x_1*x_2");
}

TEST_CASE("rewriting agrees with linear reduction on the table degree") {
  std::mt19937 gen(11);
  for (int n = 3; n <= 4; ++n) {
    const SphereAlgebra x(n);
    for (int t = 0; t < 100; ++t) {
      const AlgebraElement e = random_element(gen, n, x.table().max_degree());
      CHECK(x.normal_form(e) == x.table().reduce(e));
    }
  }
}

TEST_CASE("normal form is idempotent, linear and multiplicative") {
  std::mt19937 gen(5);
  const SphereAlgebra x(3);
  for (int t = 0; t < 200; ++t) {
    const AlgebraElement a = random_element(gen, 3, 4), b = random_element(gen, 3, 4);
    const AlgebraElement na = x.normal_form(a);
    CHECK(x.normal_form(na) == na);
    CHECK(x.is_normal(na));
    CHECK(x.normal_form(a + b) == na + x.normal_form(b));
    CHECK(x.normal_form(free_product(a, b)) == x.multiply(a, b));
  }
}

TEST_CASE("star is an antimultiplicative involution") {
  std::mt19937 gen(3);
  const SphereAlgebra x(4);
  for (int t = 0; t < 30; ++t) {
    const AlgebraElement a = random_element(gen, 4, 2), b = random_element(gen, 4, 2);
    CHECK(x.star(x.star(a)) == x.normal_form(a));
    CHECK(x.star(x.multiply(a, b)) == x.multiply(x.star(b), x.star(a)));
  }
}

TEST_CASE("degree limit") {
  const SphereAlgebra x(3, AlgebraOptions{3, 5});
  CHECK_NOTHROW(x.normal_form(Word::from_letters({3, 3, 2, 2, 1})));
  CHECK_THROWS_AS(x.normal_form(Word::from_letters({3, 3, 2, 2, 1, 1})), DegreeExceeded);
}
